#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qa::cli {

/// Runs one qanneal command line (args excludes the program name).
/// Returns 0 on success, 1 on usage errors, 2 on numerical failures.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

}  // namespace qa::cli
