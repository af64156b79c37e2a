#include "z2lab/seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace z2lab {

FiniteVector FiniteVector::from_entries(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.index < b.index; });
    FiniteVector v;
    v.entries_.reserve(entries.size());
    Index prev = 0;
    for (const Entry& e : entries) {
        if (e.index == 0) throw std::invalid_argument("FiniteVector: indices are 1-based");
        if (e.index == prev) throw std::invalid_argument("FiniteVector: duplicate index");
        prev = e.index;
        if (e.value != Complex{0.0, 0.0}) v.entries_.push_back(e);
    }
    return v;
}

Complex FiniteVector::at(Index index) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                               [](const Entry& e, Index i) { return e.index < i; });
    if (it != entries_.end() && it->index == index) return it->value;
    return {0.0, 0.0};
}

void VectorBuilder::push(Index index, Complex value) {
    if (index == 0) throw std::invalid_argument("VectorBuilder: indices are 1-based");
    if (!entries_.empty() && entries_.back().index >= index)
        throw std::invalid_argument("VectorBuilder: indices must be strictly increasing");
    if (value != Complex{0.0, 0.0}) entries_.push_back({index, value});
}

FiniteVector VectorBuilder::take() {
    FiniteVector v;
    v.entries_ = std::move(entries_);
    entries_.clear();
    return v;
}

Permutation::Permutation(std::vector<Index> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (Index im : images_) {
        if (im == 0 || im > images_.size() || seen[im - 1])
            throw std::invalid_argument("Permutation: image array is not a bijection of {1,...,n}");
        seen[im - 1] = true;
    }
}

Permutation Permutation::identity(std::size_t n) {
    std::vector<Index> images(n);
    for (std::size_t i = 0; i < n; ++i) images[i] = i + 1;
    return Permutation(std::move(images));
}

namespace {

// Neumaier-compensated sum. Caller is responsible for ordering the terms
// canonically: the value depends on the sequence of terms, not just their sum.
double compensated_sum(const std::vector<double>& terms) {
    double sum = 0.0, carry = 0.0;
    for (double t : terms) {
        const double next = sum + t;
        if (std::abs(sum) >= std::abs(t))
            carry += (sum - next) + t;
        else
            carry += (t - next) + sum;
        sum = next;
    }
    return sum + carry;
}

// Binary exponent of the largest component; |x(n)|^2 stays within range after
// scaling every component by 2^-e. Requires a nonempty x.
int scale_exponent(const FiniteVector& x) {
    double m = 0.0;
    for (const auto& e : x.entries())
        m = std::max({m, std::abs(e.value.real()), std::abs(e.value.imag())});
    return std::ilogb(m);
}

double scaled_abs2(Complex v, int e) {
    return abs2({std::ldexp(v.real(), -e), std::ldexp(v.imag(), -e)});
}

// True when |x(n)|^2 itself neither underflows nor can overflow in the sum.
bool abs2_in_range(double max_abs2, std::size_t n) {
    return max_abs2 >= std::numeric_limits<double>::min() &&
           max_abs2 <= std::numeric_limits<double>::max() / 4.0 / static_cast<double>(n);
}

double sorted_root_sum(std::vector<double>& terms) {
    // canonical order: the sum depends only on the multiset of values
    // (equal values tie, so the tie-break order is irrelevant)
    if (!std::is_sorted(terms.begin(), terms.end()))
        std::sort(terms.begin(), terms.end());
    return std::sqrt(compensated_sum(terms));
}

}  // namespace

double l2_norm(const FiniteVector& x) {
    if (x.empty()) return 0.0;
    std::vector<double> terms;
    terms.reserve(x.support_size());
    double mx = 0.0;
    for (const auto& e : x.entries()) {
        terms.push_back(abs2(e.value));
        mx = std::max(mx, terms.back());
    }
    if (abs2_in_range(mx, terms.size())) return sorted_root_sum(terms);
    // extreme magnitudes: rescale by a power of two (exact, so the
    // canonical-order reproducibility is unaffected)
    const int e = scale_exponent(x);
    for (std::size_t i = 0; i < terms.size(); ++i)
        terms[i] = scaled_abs2(x.entries()[i].value, e);
    return std::ldexp(sorted_root_sum(terms), e);
}

double sup_norm(const FiniteVector& x) {
    if (x.empty()) return 0.0;
    double mx = 0.0;
    for (const auto& e : x.entries()) mx = std::max(mx, abs2(e.value));
    if (abs2_in_range(mx, 1)) return std::sqrt(mx);
    const int e = scale_exponent(x);
    double ms = 0.0;
    for (const auto& en : x.entries()) ms = std::max(ms, scaled_abs2(en.value, e));
    return std::ldexp(std::sqrt(ms), e);
}

FiniteVector indicator(std::span<const Index> a) {
    if (a.empty()) throw std::invalid_argument("indicator: empty index set");
    std::vector<FiniteVector::Entry> entries;
    entries.reserve(a.size());
    for (Index i : a) entries.push_back({i, {1.0, 0.0}});
    return FiniteVector::from_entries(std::move(entries));
}

FiniteVector indicator_range(Index n) {
    if (n == 0) throw std::invalid_argument("indicator_range: empty index set");
    VectorBuilder b(n);
    for (Index i = 1; i <= n; ++i) b.push(i, {1.0, 0.0});
    return b.take();
}

FiniteVector permute(const FiniteVector& x, const Permutation& pi) {
    if (x.max_index() > pi.window())
        throw std::invalid_argument("permute: window does not cover the support of x");
    VectorBuilder b(x.support_size());
    for (Index n = 1; n <= pi.window(); ++n) {
        const Complex value = x.at(pi.image(n));
        if (value != Complex{0.0, 0.0}) b.push(n, value);
    }
    return b.take();
}

FiniteVector multiply(const FiniteVector& s, const FiniteVector& x) {
    VectorBuilder b(std::min(s.support_size(), x.support_size()));
    auto is = s.entries().begin();
    for (const auto& ex : x.entries()) {
        while (is != s.entries().end() && is->index < ex.index) ++is;
        if (is == s.entries().end()) break;
        if (is->index == ex.index) b.push(ex.index, is->value * ex.value);
    }
    return b.take();
}

FiniteVector conjugate(const FiniteVector& x) {
    VectorBuilder b(x.support_size());
    for (const auto& e : x.entries()) b.push(e.index, std::conj(e.value));
    return b.take();
}

FiniteVector add(const FiniteVector& a, const FiniteVector& b) {
    VectorBuilder out(a.support_size() + b.support_size());
    auto ia = a.entries().begin(), ib = b.entries().begin();
    while (ia != a.entries().end() || ib != b.entries().end()) {
        if (ib == b.entries().end() || (ia != a.entries().end() && ia->index < ib->index)) {
            out.push(ia->index, ia->value);
            ++ia;
        } else if (ia == a.entries().end() || ib->index < ia->index) {
            out.push(ib->index, ib->value);
            ++ib;
        } else {
            out.push(ia->index, ia->value + ib->value);
            ++ia;
            ++ib;
        }
    }
    return out.take();
}

FiniteVector subtract(const FiniteVector& a, const FiniteVector& b) {
    VectorBuilder out(a.support_size() + b.support_size());
    auto ia = a.entries().begin(), ib = b.entries().begin();
    while (ia != a.entries().end() || ib != b.entries().end()) {
        if (ib == b.entries().end() || (ia != a.entries().end() && ia->index < ib->index)) {
            out.push(ia->index, ia->value);
            ++ia;
        } else if (ia == a.entries().end() || ib->index < ia->index) {
            out.push(ib->index, -ib->value);
            ++ib;
        } else {
            out.push(ia->index, ia->value - ib->value);
            ++ia;
            ++ib;
        }
    }
    return out.take();
}

FiniteVector scale(const FiniteVector& x, Complex factor) {
    VectorBuilder b(x.support_size());
    for (const auto& e : x.entries()) b.push(e.index, factor * e.value);
    return b.take();
}

}  // namespace z2lab
