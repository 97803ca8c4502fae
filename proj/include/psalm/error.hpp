// Copyright 2026 The PSALM Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PSALM_ERROR_HPP_
#define PSALM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace psalm {

// Base of every domain error raised by the library. `name()` is the stable
// error identifier printed by the CLI ("OverlapError", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define PSALM_DECLARE_ERROR(Name)                                  \
  class Name : public Error {                                      \
   public:                                                         \
    explicit Name(const std::string& message) : Error(#Name, message) {} \
  }

// partition
PSALM_DECLARE_ERROR(OverlapError);
PSALM_DECLARE_ERROR(CoverageError);
PSALM_DECLARE_ERROR(EmptySubdomainError);
PSALM_DECLARE_ERROR(EmptyDomainError);
PSALM_DECLARE_ERROR(DomainError);
// allocation
PSALM_DECLARE_ERROR(InvalidSizeError);
PSALM_DECLARE_ERROR(InsufficientBudgetError);
// metamorphic
PSALM_DECLARE_ERROR(ArityError);
PSALM_DECLARE_ERROR(ConstraintError);
PSALM_DECLARE_ERROR(DuplicateMgError);
PSALM_DECLARE_ERROR(ExecutionError);
PSALM_DECLARE_ERROR(FormatError);
// strategies
PSALM_DECLARE_ERROR(NonNumericDomainError);
PSALM_DECLARE_ERROR(DomainKindError);
PSALM_DECLARE_ERROR(UnknownStrategyError);
// subjects
PSALM_DECLARE_ERROR(UnknownMutantError);
PSALM_DECLARE_ERROR(InputDomainError);
PSALM_DECLARE_ERROR(RegistrationError);
// oracle
PSALM_DECLARE_ERROR(EmptyMgSetError);
PSALM_DECLARE_ERROR(EmptySetError);
PSALM_DECLARE_ERROR(ShapeMismatchError);
PSALM_DECLARE_ERROR(InstanceError);
// experiment
PSALM_DECLARE_ERROR(UnknownIdError);
PSALM_DECLARE_ERROR(ConfigError);
// stats
PSALM_DECLARE_ERROR(EmptySampleError);
PSALM_DECLARE_ERROR(SampleSizeError);
PSALM_DECLARE_ERROR(ZeroBaselineError);

#undef PSALM_DECLARE_ERROR

}  // namespace psalm

#endif  // PSALM_ERROR_HPP_
