#pragma once

#include <string>

#include "vldcop/benchgen.hpp"

namespace vldcop {

// Canonical sectioned text format for task documents. serialize_task is
// canonical: parse_task(serialize_task(t)) reproduces t and re-serializing is
// byte-identical.
std::string serialize_task(const VlTask& task);
VlTask parse_task(const std::string& text);

void save_task(const VlTask& task, const std::string& path);
VlTask load_task(const std::string& path);

// Re-checks every generation invariant: oracle-table consistency, machine
// block round-trips, chart decodability, instruction coverage.
// Throws std::runtime_error with a description on the first violation.
void validate_task(const VlTask& task);

std::string escape_text(const std::string& s);
std::string unescape_text(const std::string& s);

}  // namespace vldcop
