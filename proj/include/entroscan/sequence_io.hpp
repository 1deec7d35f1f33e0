#pragma once

#include "entroscan/entropy.hpp"

#include <optional>
#include <string>

namespace entroscan {

// One integer symbol per line, or a single line of comma-separated symbols.
// Alphabet size is inferred as max symbol + 1 unless given explicitly.
SymbolSequence load_symbol_sequence(const std::string& path, std::optional<std::int64_t> alphabet_size = {});

// Canonical form: one symbol per line.
void save_symbol_sequence(const SymbolSequence& seq, const std::string& path);

}  // namespace entroscan
