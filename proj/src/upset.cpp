#include "finord/upset.hpp"

#include <cctype>
#include <numeric>
#include <sstream>

#include "finord/automata.hpp"
#include "finord/errors.hpp"

namespace finord {

UPSet::UPSet(std::set<std::uint64_t> init, std::uint64_t threshold, std::uint64_t period,
             std::set<std::uint64_t> residues)
    : init_(std::move(init)), threshold_(threshold), period_(period), residues_(std::move(residues)) {
    if (period_ == 0) throw DomainError("UPSet: period must be positive");
    if (!init_.empty() && *init_.rbegin() >= threshold_) throw DomainError("UPSet: initial elements must lie below N");
    if (!residues_.empty() && *residues_.rbegin() >= period_) throw DomainError("UPSet: residues must lie below d");
}

UPSet UPSet::singleton(std::uint64_t n) { return UPSet({n}, n + 1, 1, {}); }

UPSet UPSet::progression(std::uint64_t from, std::uint64_t d, std::uint64_t r) {
    if (d == 0) throw DomainError("UPSet: period must be positive");
    return canonicalize(UPSet({}, from, d, {r % d}));
}

bool UPSet::member(std::uint64_t n) const {
    if (n < threshold_) return init_.count(n) > 0;
    return residues_.count(n % period_) > 0;
}

bool UPSet::is_empty() const { return init_.empty() && residues_.empty(); }

bool UPSet::is_canonical() const { return canonicalize(*this) == *this; }

std::optional<std::uint64_t> UPSet::min_element() const {
    if (!init_.empty()) return *init_.begin();
    for (std::uint64_t n = threshold_; n < threshold_ + period_; ++n)
        if (member(n)) return n;
    return std::nullopt;
}

UPSet canonicalize(const UPSet& s) {
    const auto d = s.period();
    // Smallest divisor of d under which the residue pattern is invariant.
    std::uint64_t best = d;
    for (std::uint64_t p = 1; p < d; ++p) {
        if (d % p != 0) continue;
        bool periodic = true;
        for (std::uint64_t r = 0; r < d && periodic; ++r)
            periodic = s.residues().count(r) == s.residues().count((r + p) % d);
        if (periodic) {
            best = p;
            break;
        }
    }
    std::set<std::uint64_t> residues;
    for (auto r : s.residues()) residues.insert(r % best);

    std::uint64_t n = s.threshold();
    while (n > 0 && s.member(n - 1) == (residues.count((n - 1) % best) > 0)) --n;
    std::set<std::uint64_t> init;
    for (auto i : s.init())
        if (i < n) init.insert(i);
    return UPSet(std::move(init), n, best, std::move(residues));
}

namespace {

template <class Pred> UPSet tabulate(std::uint64_t threshold, std::uint64_t period, Pred member) {
    std::set<std::uint64_t> init, residues;
    for (std::uint64_t n = 0; n < threshold; ++n)
        if (member(n)) init.insert(n);
    for (std::uint64_t n = threshold; n < threshold + period; ++n)
        if (member(n)) residues.insert(n % period);
    return canonicalize(UPSet(std::move(init), threshold, period, std::move(residues)));
}

} // namespace

UPSet boolean_op(const UPSet& a, const UPSet& b, SetOp op) {
    const auto n = std::max(a.threshold(), b.threshold());
    const auto d = std::lcm(a.period(), b.period());
    return tabulate(n, d, [&](std::uint64_t x) {
        const bool in_a = a.member(x), in_b = b.member(x);
        switch (op) {
        case SetOp::Union: return in_a || in_b;
        case SetOp::Intersection: return in_a && in_b;
        default: return in_a && !in_b;
        }
    });
}

UPSet complement(const UPSet& a) {
    return tabulate(a.threshold(), a.period(), [&](std::uint64_t x) { return !a.member(x); });
}

UPSet minkowski_sum(const UPSet& a, const UPSet& b, const AutomataLimits& limits) {
    return lasso_spectrum(concatenate_unary(unary_dfa(a), unary_dfa(b), limits));
}

UPSet minkowski_sum(const UPSet& a, const UPSet& b) { return minkowski_sum(a, b, AutomataLimits{}); }

std::uint64_t brute_force_bound(const UPSet& a, const UPSet& b) {
    return a.threshold() + b.threshold() + 4 * a.period() * b.period();
}

std::set<std::uint64_t> brute_force_oracle(const UPSet& a, const UPSet& b) {
    const auto bound = brute_force_bound(a, b);
    std::set<std::uint64_t> out;
    for (std::uint64_t x = 0; x < bound; ++x) {
        if (!a.member(x)) continue;
        for (std::uint64_t y = 0; y < bound; ++y)
            if (b.member(y)) out.insert(x + y);
    }
    return out;
}

NormalFormDescriptor to_normal_form(const UPSet& s) {
    const auto c = canonicalize(s);
    NormalFormDescriptor nf;
    nf.period = c.period();
    nf.threshold = std::max(c.threshold(), c.period());
    for (std::uint64_t n = 0; n <= nf.threshold; ++n)
        if (c.member(n)) nf.i_set.push_back(n);
    for (std::uint64_t h = 1; h <= nf.period; ++h) {
        // Smallest n > threshold with n = h (mod d).
        const auto base = nf.threshold + 1;
        const auto n = base + (h % nf.period + nf.period - base % nf.period) % nf.period;
        if (c.member(n)) nf.r_set.push_back(h);
    }
    return nf;
}

namespace {

void print_set(std::ostringstream& out, const std::set<std::uint64_t>& s) {
    out << '{';
    bool first = true;
    for (auto x : s) {
        out << (first ? "" : ",") << x;
        first = false;
    }
    out << '}';
}

class UpReader {
public:
    explicit UpReader(std::string_view text) : text_(text) {}

    UPSet read() {
        expect("UP");
        expect("(");
        expect("init");
        expect("=");
        auto init = set();
        expect(";");
        expect("N");
        expect("=");
        const auto n = number();
        expect(";");
        expect("d");
        expect("=");
        const auto d = number();
        expect(";");
        expect("res");
        expect("=");
        auto res = set();
        expect(")");
        skip();
        if (pos_ != text_.size()) throw SyntaxError("trailing input after UP(...)", pos_);
        return UPSet(std::move(init), n, d, std::move(res));
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    void expect(std::string_view word) {
        skip();
        if (text_.substr(pos_, word.size()) != word) throw SyntaxError("expected '" + std::string(word) + "'", pos_);
        pos_ += word.size();
    }
    std::uint64_t number() {
        skip();
        const auto start = pos_;
        std::uint64_t value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            const auto digit = static_cast<std::uint64_t>(text_[pos_] - '0');
            if (value > (UINT64_MAX - digit) / 10) throw SyntaxError("number too large", start);
            value = value * 10 + digit;
            ++pos_;
        }
        if (pos_ == start) throw SyntaxError("expected a natural number", start);
        return value;
    }
    std::set<std::uint64_t> set() {
        expect("{");
        std::set<std::uint64_t> out;
        skip();
        if (pos_ < text_.size() && text_[pos_] == '}') {
            ++pos_;
            return out;
        }
        for (;;) {
            const auto at = pos_;
            const auto x = number();
            if (!out.empty() && x <= *out.rbegin()) throw SyntaxError("set elements must be strictly increasing", at);
            out.insert(x);
            skip();
            if (pos_ < text_.size() && text_[pos_] == ',') {
                ++pos_;
                continue;
            }
            expect("}");
            return out;
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

std::string to_string(const UPSet& s) {
    std::ostringstream out;
    out << "UP(init=";
    print_set(out, s.init());
    out << ";N=" << s.threshold() << ";d=" << s.period() << ";res=";
    print_set(out, s.residues());
    out << ')';
    return out.str();
}

UPSet parse_upset(std::string_view text, bool require_canonical) {
    auto s = UpReader(text).read();
    if (require_canonical && !s.is_canonical())
        throw DomainError("UP value is not canonical; canonical form is " + to_string(canonicalize(s)));
    return s;
}

} // namespace finord
