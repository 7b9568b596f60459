#pragma once

#include <iosfwd>

namespace keymaze {

// Entry point behind the keymaze binary, factored out so tests can drive the
// full pipeline in-process. Exit codes: 0 success, 1 usage error, 2 data
// error, 3 endpoint error.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace keymaze
