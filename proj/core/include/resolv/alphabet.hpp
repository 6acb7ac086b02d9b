#ifndef RESOLV_ALPHABET_HPP
#define RESOLV_ALPHABET_HPP

#include <string>
#include <vector>

#include "resolv/errors.hpp"

namespace resolv {

// Descriptor of an input or output alphabet: finite with indexed symbols, or
// the real line. Finite symbols are 0-based indices everywhere; labels are
// cosmetic and only used by serialization and the CLI.
class Alphabet {
public:
    enum class Kind { Finite, RealLine };

    static Alphabet finite(int size, std::vector<std::string> labels = {}) {
        if (size < 1) throw DomainError("Alphabet: finite size must be >= 1");
        if (!labels.empty() && static_cast<int>(labels.size()) != size)
            throw DomainError("Alphabet: label count must match size");
        Alphabet a;
        a.kind_ = Kind::Finite;
        a.size_ = size;
        a.labels_ = std::move(labels);
        return a;
    }

    static Alphabet real_line() {
        Alphabet a;
        a.kind_ = Kind::RealLine;
        return a;
    }

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }

    int size() const {
        if (!is_finite()) throw DomainError("Alphabet: size() on real-line alphabet");
        return size_;
    }

    const std::vector<std::string>& labels() const { return labels_; }

    bool contains(int symbol) const {
        return is_finite() && symbol >= 0 && symbol < size_;
    }

private:
    Kind kind_ = Kind::Finite;
    int size_ = 1;
    std::vector<std::string> labels_;
};

} // namespace resolv

#endif
