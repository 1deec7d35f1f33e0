#include "entroscan/sequence_io.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace entroscan {

SymbolSequence load_symbol_sequence(const std::string& path, std::optional<std::int64_t> alphabet_size) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open sequence file: " + path);
    SymbolSequence seq;
    std::string token;
    auto flush = [&](const std::string& tok) {
        if (tok.empty()) return;
        std::size_t used = 0;
        long v;
        try {
            v = std::stol(tok, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("sequence file " + path + ": bad symbol '" + tok + "'");
        }
        if (used != tok.size() || v < 0) throw std::runtime_error("sequence file " + path + ": bad symbol '" + tok + "'");
        seq.symbols.push_back(static_cast<std::int32_t>(v));
    };
    std::string word;
    char c;
    while (in.get(c)) {
        if (c == ',' || c == '\n' || c == '\r' || c == ' ' || c == '\t') {
            flush(word);
            word.clear();
        } else {
            word.push_back(c);
        }
    }
    flush(word);
    if (seq.symbols.empty()) throw std::runtime_error("sequence file has no symbols: " + path);

    const std::int32_t max_symbol = *std::max_element(seq.symbols.begin(), seq.symbols.end());
    if (alphabet_size) {
        if (*alphabet_size <= max_symbol) {
            throw std::runtime_error("sequence file " + path + ": symbol " + std::to_string(max_symbol) +
                                     " outside alphabet of size " + std::to_string(*alphabet_size));
        }
        seq.alphabet_size = *alphabet_size;
    } else {
        seq.alphabet_size = max_symbol + 1;
    }
    return seq;
}

void save_symbol_sequence(const SymbolSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write sequence file: " + path);
    for (std::int32_t s : seq.symbols) out << s << "\n";
}

}  // namespace entroscan
