#ifndef GEOPHASE_CLI_HPP
#define GEOPHASE_CLI_HPP

#include <ostream>

namespace geophase {

/// Entry point of the geophase tool. Exit codes: 0 success, 1 usage error,
/// 2 numerical failure (including a broken audit contract).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace geophase

#endif  // GEOPHASE_CLI_HPP
