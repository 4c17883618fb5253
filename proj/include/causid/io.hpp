#pragma once

#include <string>

#include "causid/graph.hpp"

namespace causid {

// `node A, B` / `A -> B` / `A <-> B` / `# comment`, one statement per line.
Admg parse_graph(const std::string& text);
Admg load_graph(const std::string& path);
std::string serialize_graph(const Admg& g);

// "A->M->Y"
Path parse_path(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace causid
