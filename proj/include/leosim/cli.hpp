// cli.hpp: `leosim` command-line front end
//
// Subcommands: simulate, figure, sweep, validate, list. Exit status is 0 on
// success, 2 on invalid input (bad flag, unknown scenario), 1 on solver
// failure or a failed assertion/check.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace leosim {

// Output directory used when --out is absent.
inline constexpr const char* out_dir_env = "LEOSIM_OUT_DIR";

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leosim
