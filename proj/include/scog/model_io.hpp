#pragma once

#include "scog/core.hpp"

#include <filesystem>
#include <iosfwd>

namespace scog {

// Line-oriented text container. Layout (one record per line, single spaces):
//
//   SCOGMODEL <version>
//   window <n> <stride>
//   merge_threshold <double>
//   branch_threshold <double>
//   max_representations <count|unbounded>
//   codebook <bits_per_symbol> <pad_symbol> <symbol_count>
//   symbol <char> <k> <bit_1> ... <bit_k>          (symbol_count lines)
//   labels <count>
//   label <text to end of line>                     (count lines)
//   trained_count <count>
//   nodes <count>
//   node <id> <parent|-> <nc> <child...> <na> <bit...> <nl> <label_index> <count> ...
//   roots <count> <id...>
//   end
//
// Doubles are written in shortest round-trip form, so save/load is bit-exact.
inline constexpr int model_format_version = 1;

void write_model(std::ostream& out, const Model& m);
Model read_model(std::istream& in);

void save_model(const Model& m, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

} // namespace scog
