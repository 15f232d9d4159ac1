#include "finord/types0.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "finord/compile.hpp"
#include "finord/errors.hpp"

namespace finord {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

std::optional<std::pair<u64, unsigned>> prime_power(u64 q) {
    if (q < 2) return std::nullopt;
    u64 p = 2;
    while (p * p <= q && q % p != 0) ++p;
    if (q % p != 0) p = q;
    unsigned j = 0;
    while (q % p == 0) {
        q /= p;
        ++j;
    }
    if (q != 1) return std::nullopt;
    return std::pair{p, j};
}

namespace {

u64 ipow(u64 p, unsigned j) {
    u64 out = 1;
    while (j--) out *= p;
    return out;
}

// Inverse of a modulo m, gcd(a, m) = 1, m >= 1.
u64 inverse(u64 a, u64 m) {
    __int128 old_r = a % m, r = m, old_s = 1, s = 0;
    while (r != 0) {
        const __int128 q = old_r / r;
        std::tie(old_r, r) = std::pair{r, old_r - q * r};
        std::tie(old_s, s) = std::pair{s, old_s - q * s};
    }
    __int128 inv = old_s % static_cast<__int128>(m);
    if (inv < 0) inv += m;
    return static_cast<u64>(inv);
}

std::vector<std::pair<u64, unsigned>> factor(u64 d) {
    std::vector<std::pair<u64, unsigned>> out;
    for (u64 p = 2; p * p <= d; ++p) {
        unsigned j = 0;
        while (d % p == 0) {
            d /= p;
            ++j;
        }
        if (j) out.emplace_back(p, j);
    }
    if (d > 1) out.emplace_back(d, 1);
    return out;
}

// Entries grouped by prime: prime -> (exponent -> residue).
std::map<u64, std::map<unsigned, u64>> by_prime(const std::map<u64, u64>& entries) {
    std::map<u64, std::map<unsigned, u64>> out;
    for (const auto& [q, r] : entries) {
        auto pp = prime_power(q);
        if (pp) out[pp->first][pp->second] = r;
    }
    return out;
}

ResidueSpec shifted(const ResidueSpec& s, u64 m) {
    if (s.kind() == ResidueSpec::Kind::ZeroShift) return ResidueSpec::zero_shift(s.shift() + m);
    std::map<u64, u64> entries;
    for (const auto& [q, r] : s.entries()) entries[q] = static_cast<u64>((u128{r} + m % q) % q);
    return ResidueSpec::table(std::move(entries));
}

} // namespace

u64 crt_solve(const std::vector<std::pair<u64, u64>>& congruences) {
    for (std::size_t i = 0; i < congruences.size(); ++i) {
        if (congruences[i].first == 0) throw DomainError("crt_solve: modulus must be positive");
        for (std::size_t j = i + 1; j < congruences.size(); ++j)
            if (std::gcd(congruences[i].first, congruences[j].first) != 1)
                throw DomainError("crt_solve: moduli " + std::to_string(congruences[i].first) + " and " +
                                  std::to_string(congruences[j].first) + " are not coprime");
    }
    u64 x = 0, modulus = 1;
    for (const auto& [m, r] : congruences) {
        const u128 product = u128{modulus} * m;
        if (product > u128{UINT64_MAX}) throw DomainError("crt_solve: product of moduli overflows 64 bits");
        // x + modulus * t = r (mod m)
        const u64 target = static_cast<u64>((u128{r % m} + m - x % m) % m);
        const u64 t = static_cast<u64>(u128{target} * inverse(modulus % m, m) % m);
        x = static_cast<u64>(u128{x} + u128{modulus} * t);
        modulus = static_cast<u64>(product);
    }
    return x;
}

ResidueSpec ResidueSpec::table(std::map<u64, u64> entries) {
    ResidueSpec s;
    s.kind_ = Kind::Table;
    s.entries_ = std::move(entries);
    return s;
}

ResidueSpec ResidueSpec::zero_shift(u64 c) {
    ResidueSpec s;
    s.kind_ = Kind::ZeroShift;
    s.shift_ = c;
    return s;
}

std::vector<std::string> validate(const ResidueSpec& spec) {
    std::vector<std::string> problems;
    if (spec.kind() == ResidueSpec::Kind::ZeroShift) return problems;
    for (const auto& [q, r] : spec.entries()) {
        if (!prime_power(q)) problems.push_back("modulus " + std::to_string(q) + " is not a prime power");
        if (r >= q) problems.push_back("residue " + std::to_string(r) + " is not below its modulus " + std::to_string(q));
    }
    for (const auto& [p, levels] : by_prime(spec.entries())) {
        for (auto lo = levels.begin(); lo != levels.end(); ++lo)
            for (auto hi = std::next(lo); hi != levels.end(); ++hi) {
                const u64 q = ipow(p, lo->first);
                if (hi->second % q != lo->second % q)
                    problems.push_back("residues at " + std::to_string(p) + "^" + std::to_string(lo->first) + " and " +
                                       std::to_string(p) + "^" + std::to_string(hi->first) + " are incoherent");
            }
    }
    return problems;
}

ResidueSpec normalized(const ResidueSpec& spec) {
    if (spec.kind() == ResidueSpec::Kind::ZeroShift) return spec;
    auto problems = validate(spec);
    if (!problems.empty()) throw DomainError("invalid residue table: " + problems.front());
    std::map<u64, u64> entries;
    for (const auto& [p, levels] : by_prime(spec.entries())) {
        const auto& [j, r] = *levels.rbegin();
        entries[ipow(p, j)] = r;
    }
    return ResidueSpec::table(std::move(entries));
}

std::optional<u64> residue_extend(const ResidueSpec& spec, u64 d) {
    if (d <= 1) throw DomainError("residue_extend: d must exceed 1");
    if (spec.kind() == ResidueSpec::Kind::ZeroShift) return spec.shift() % d;
    const auto levels = by_prime(normalized(spec).entries());
    std::vector<std::pair<u64, u64>> congruences;
    for (const auto& [p, e] : factor(d)) {
        auto it = levels.find(p);
        if (it == levels.end()) return std::nullopt;
        const auto& [j, r] = *it->second.rbegin();
        if (j < e) return std::nullopt;
        const u64 q = ipow(p, e);
        congruences.emplace_back(q, r % q);
    }
    return crt_solve(congruences);
}

u64 rep(u64 v, u64 d) { return v % d == 0 ? d : v % d; }

TypePoint TypePoint::fin(u64 n) {
    TypePoint p;
    p.n_ = n;
    return p;
}

TypePoint TypePoint::inf(const ResidueSpec& spec) {
    TypePoint p;
    p.spec_ = normalized(spec);
    return p;
}

u64 TypePoint::size() const {
    if (!is_finite()) throw DomainError("TypePoint: infinite point has no size");
    return n_;
}

const ResidueSpec& TypePoint::spec() const {
    if (is_finite()) throw DomainError("TypePoint: finite point has no residue spec");
    return *spec_;
}

std::string to_string(Truth t) {
    switch (t) {
    case Truth::True: return "true";
    case Truth::False: return "false";
    default: return "undetermined";
    }
}

Truth point_models(const TypePoint& p, const UPSet& spec_set) {
    if (p.is_finite()) return spec_set.member(p.size()) ? Truth::True : Truth::False;
    const auto nf = to_normal_form(spec_set);
    auto has = [&](u64 h) { return std::find(nf.r_set.begin(), nf.r_set.end(), h) != nf.r_set.end(); };
    if (nf.period == 1) return has(1) ? Truth::True : Truth::False;
    const auto v = residue_extend(p.spec(), nf.period);
    if (!v) return Truth::Undetermined;
    return has(rep(*v, nf.period)) ? Truth::True : Truth::False;
}

Truth point_models(const TypePoint& p, const Formula& sentence, const AutomataLimits& limits) {
    return point_models(p, spectrum(sentence, limits));
}

TypePoint point_mul(const TypePoint& p, const TypePoint& q) {
    if (p.is_finite() && q.is_finite()) return TypePoint::fin(p.size() + q.size());
    if (p.is_finite()) return TypePoint::inf(shifted(q.spec(), p.size()));
    if (q.is_finite()) return TypePoint::inf(shifted(p.spec(), q.size()));
    const auto& s = p.spec();
    const auto& t = q.spec();
    using Kind = ResidueSpec::Kind;
    if (s.kind() == Kind::ZeroShift && t.kind() == Kind::ZeroShift)
        return TypePoint::inf(ResidueSpec::zero_shift(s.shift() + t.shift()));
    if (s.kind() == Kind::ZeroShift) return TypePoint::inf(shifted(t, s.shift()));
    if (t.kind() == Kind::ZeroShift) return TypePoint::inf(shifted(s, t.shift()));
    // Residues add at the coarser of the two levels known for each prime.
    const auto ls = by_prime(s.entries());
    const auto lt = by_prime(t.entries());
    std::map<u64, u64> entries;
    for (const auto& [prime, levels] : ls) {
        auto it = lt.find(prime);
        if (it == lt.end()) continue;
        const auto& [js, rs] = *levels.rbegin();
        const auto& [jt, rt] = *it->second.rbegin();
        const u64 mod = ipow(prime, std::min(js, jt));
        entries[mod] = (rs % mod + rt % mod) % mod;
    }
    return TypePoint::inf(ResidueSpec::table(std::move(entries)));
}

bool pseudofinite_valid(const Formula& sentence, const AutomataLimits& limits) {
    return spectrum(sentence, limits) == UPSet::naturals();
}

std::optional<u64> satisfiable_witness(const Formula& sentence, const AutomataLimits& limits) {
    return spectrum(sentence, limits).min_element();
}

std::string to_string(const TypePoint& p) {
    if (p.is_finite()) return "fin:" + std::to_string(p.size());
    const auto& s = p.spec();
    if (s.kind() == ResidueSpec::Kind::ZeroShift) return "inf:zero+" + std::to_string(s.shift());
    std::string out = "inf:";
    bool first = true;
    for (const auto& [prime, levels] : by_prime(s.entries())) {
        const auto& [j, r] = *levels.rbegin();
        out += (first ? "" : ";") + std::to_string(prime) + "^" + std::to_string(j) + "=" + std::to_string(r);
        first = false;
    }
    return out;
}

namespace {

class PointReader {
public:
    explicit PointReader(std::string_view text) : text_(text) {}

    TypePoint read() {
        if (take("fin:")) {
            const auto n = number();
            end();
            return TypePoint::fin(n);
        }
        if (!take("inf:")) throw SyntaxError("point must start with 'fin:' or 'inf:'", 0);
        if (take("zero+")) {
            const auto c = number();
            end();
            return TypePoint::inf(ResidueSpec::zero_shift(c));
        }
        std::map<u64, u64> entries;
        while (pos_ < text_.size()) {
            const auto at = pos_;
            const auto p = number();
            expect('^');
            const auto j = number();
            expect('=');
            const auto r = number();
            if (!is_prime(p)) throw SyntaxError(std::to_string(p) + " is not prime", at);
            if (j == 0 || j > 63) throw SyntaxError("exponent out of range", at);
            u128 q = 1;
            for (u64 i = 0; i < j; ++i) {
                q *= p;
                if (q > u128{UINT64_MAX}) throw SyntaxError("prime power overflows 64 bits", at);
            }
            if (!entries.emplace(static_cast<u64>(q), r).second) throw SyntaxError("duplicate modulus", at);
            if (pos_ < text_.size()) expect(';');
        }
        auto spec = ResidueSpec::table(std::move(entries));
        auto problems = validate(spec);
        if (!problems.empty()) throw DomainError("invalid residue table: " + problems.front());
        return TypePoint::inf(spec);
    }

private:
    bool take(std::string_view word) {
        if (text_.substr(pos_, word.size()) != word) return false;
        pos_ += word.size();
        return true;
    }
    void expect(char c) {
        if (pos_ >= text_.size() || text_[pos_] != c) throw SyntaxError(std::string("expected '") + c + "'", pos_);
        ++pos_;
    }
    u64 number() {
        u64 value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + text_.size(), value);
        if (ec != std::errc{}) throw SyntaxError("expected a natural number", pos_);
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }
    void end() {
        if (pos_ != text_.size()) throw SyntaxError("trailing input in point", pos_);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace

TypePoint parse_point(std::string_view text) { return PointReader(text).read(); }

} // namespace finord
