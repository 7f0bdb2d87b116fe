/*
 * Copyright 2026 The coinbox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace coinbox {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define COINBOX_DEFINE_ERROR(NAME)            \
  struct NAME : Error {                       \
    using Error::Error;                       \
  }

COINBOX_DEFINE_ERROR(CycleError);           // combined relation is not antisymmetric
COINBOX_DEFINE_ERROR(UnknownElementError);  // label not in the poset
COINBOX_DEFINE_ERROR(IncompatibleError);    // union of orders contains a cycle
COINBOX_DEFINE_ERROR(NotASubposetError);
COINBOX_DEFINE_ERROR(NotAdvancingError);    // delay function with t not below f(t)
COINBOX_DEFINE_ERROR(DimensionMismatchError);
COINBOX_DEFINE_ERROR(AlreadyLinkedError);
COINBOX_DEFINE_ERROR(CausalLoopError);
COINBOX_DEFINE_ERROR(UnschedulableError);
COINBOX_DEFINE_ERROR(ExplosionError);       // enumeration exceeded its branch cap
COINBOX_DEFINE_ERROR(DomainMismatchError);
COINBOX_DEFINE_ERROR(NotCombModelError);    // inner messages do not alternate
COINBOX_DEFINE_ERROR(ParamRangeError);
COINBOX_DEFINE_ERROR(LengthMismatchError);
COINBOX_DEFINE_ERROR(NotAPartitionError);
COINBOX_DEFINE_ERROR(FormatError);          // malformed JSON/CSV/fraction input
COINBOX_DEFINE_ERROR(ClaimError);           // a checked closed-form value failed to match

#undef COINBOX_DEFINE_ERROR

}  // namespace coinbox
