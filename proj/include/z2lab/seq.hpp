#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace z2lab {

using Complex = std::complex<double>;
using Index = std::uint64_t;  // 1-based coordinate index

inline double abs2(Complex z) {
    return z.real() * z.real() + z.imag() * z.imag();
}

// Finite-support complex sequence in canonical sparse form: entries sorted by
// index, no stored value is exactly zero. Indices start at 1. Immutable after
// construction; all operations below are pure functions.
class FiniteVector {
public:
    struct Entry {
        Index index;
        Complex value;
    };

    FiniteVector() = default;

    // Canonicalizes: sorts by index, drops exact zeros. Throws on duplicate
    // indices or index 0.
    static FiniteVector from_entries(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t support_size() const { return entries_.size(); }

    // Value at an index, zero when absent.
    Complex at(Index index) const;

    // Largest support index, 0 for the empty vector.
    Index max_index() const { return entries_.empty() ? 0 : entries_.back().index; }

private:
    std::vector<Entry> entries_;

    friend class VectorBuilder;
};

// Append-only builder for code that produces entries in increasing index
// order; skips exact zeros so the canonical form is preserved.
class VectorBuilder {
public:
    explicit VectorBuilder(std::size_t reserve = 0) { entries_.reserve(reserve); }

    void push(Index index, Complex value);
    FiniteVector take();

private:
    std::vector<FiniteVector::Entry> entries_;
};

// Bijection of {1,...,n} stored as the image array: image(i) = pi(i).
class Permutation {
public:
    explicit Permutation(std::vector<Index> images);

    static Permutation identity(std::size_t n);

    std::size_t window() const { return images_.size(); }
    Index image(Index i) const { return images_[i - 1]; }

private:
    std::vector<Index> images_;
};

// (sum |x(n)|^2)^(1/2). The squared magnitudes are accumulated in a canonical
// order (sorted by value) with Neumaier compensation, so the result depends
// only on the multiset of coordinate values: rearrangements and conjugations
// reproduce it bit for bit.
double l2_norm(const FiniteVector& x);

// max |x(n)|, computed from the same squared magnitudes as l2_norm so that
// sup_norm(x) <= l2_norm(x) holds exactly.
double sup_norm(const FiniteVector& x);

// xi_A: value 1 at each index of A. Throws if A is empty or contains
// duplicates or index 0.
FiniteVector indicator(std::span<const Index> a);
FiniteVector indicator_range(Index n);  // A = {1,...,n}

// x_pi with x_pi(n) = x(pi(n)). Throws if the window does not cover the
// support of x.
FiniteVector permute(const FiniteVector& x, const Permutation& pi);

// Coordinatewise product s*x; indices missing from s act as zero.
FiniteVector multiply(const FiniteVector& s, const FiniteVector& x);

FiniteVector conjugate(const FiniteVector& x);
FiniteVector add(const FiniteVector& a, const FiniteVector& b);
FiniteVector subtract(const FiniteVector& a, const FiniteVector& b);
FiniteVector scale(const FiniteVector& x, Complex factor);

}  // namespace z2lab
