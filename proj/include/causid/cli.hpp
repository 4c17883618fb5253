#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace causid {

// Exit status: 0 identifiable / success, 2 not identifiable, 1 usage, parse or model error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace causid
