#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "multigiant/degree_model.hpp"

namespace multigiant {

// Spec file:
//   {"parts": p, "atoms": [{"part": i, "degree": [d_1, ..., d_p], "mass": "a/b" | 0.25}, ...]}
// Sequence file:
//   {"parts": p, "n": n, "atoms": [{"part": i, "degree": [...], "count": c}, ...]}
// Parts are 1-based in files. Unknown fields, duplicate atoms and negative
// masses/counts are rejected with a ParseError naming the offending field.
// JSON integers and "a/b" strings are exact masses; JSON floats are not.

DegreeSpec parse_spec(std::string_view text);
std::string dump_spec(const DegreeSpec& spec);
DegreeSpec load_spec(const std::filesystem::path& path);
void save_spec(const DegreeSpec& spec, const std::filesystem::path& path);

DegreeSequence parse_sequence(std::string_view text);
std::string dump_sequence(const DegreeSequence& seq);
DegreeSequence load_sequence(const std::filesystem::path& path);
void save_sequence(const DegreeSequence& seq, const std::filesystem::path& path);

} // namespace multigiant
