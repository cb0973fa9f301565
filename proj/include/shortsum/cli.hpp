#pragma once

#include <iosfwd>

namespace shortsum {

/// Command-line entry point. Returns 0 on success, 1 on usage errors and
/// 2 when a computation fails. Diagnostics go to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shortsum
