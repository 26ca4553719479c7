// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace exprkit {

inline constexpr const char* kToolkitVersion = "0.1.0";

} // namespace exprkit
