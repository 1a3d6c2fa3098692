// Copyright 2026 The dpufl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPUFL_STATUS_MACROS_H_
#define DPUFL_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DPUFL_STATUS_CONCAT_INNER_(a, b) a##b
#define DPUFL_STATUS_CONCAT_(a, b) DPUFL_STATUS_CONCAT_INNER_(a, b)

#define DPUFL_RETURN_IF_ERROR(expr)              \
  do {                                           \
    ::absl::Status _dpufl_status = (expr);       \
    if (!_dpufl_status.ok()) return _dpufl_status; \
  } while (0)

#define DPUFL_ASSIGN_OR_RETURN_IMPL_(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                 \
  if (!tmp.ok()) return tmp.status();                 \
  lhs = std::move(tmp).value()

#define DPUFL_ASSIGN_OR_RETURN(lhs, rexpr) \
  DPUFL_ASSIGN_OR_RETURN_IMPL_(            \
      DPUFL_STATUS_CONCAT_(_dpufl_statusor_, __LINE__), lhs, rexpr)

#endif  // DPUFL_STATUS_MACROS_H_
