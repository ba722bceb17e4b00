#pragma once

#include <iosfwd>

#include "hsq/error.hpp"

namespace hsq {

// 0 ok, 1 check failure, 2 usage or configuration, 3 numeric failure.
int exit_code_for(ErrorKind k);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hsq
