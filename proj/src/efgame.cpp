#include "finord/efgame.hpp"

#include <algorithm>
#include <unordered_map>

#include "finord/errors.hpp"

namespace finord {

std::string to_string(Player p) { return p == Player::Spoiler ? "spoiler" : "duplicator"; }

namespace {

// One byte per unnested atomic formula over the terms (bot, t1, ..., tL).
std::string signature(const Subset* tuple, std::size_t len) {
    const std::size_t terms = len + 1;
    auto term = [&](std::size_t i) { return i == 0 ? Subset{} : tuple[i - 1]; };
    std::string sig;
    sig.reserve(terms * terms * 3 + terms);
    for (std::size_t i = 0; i < terms; ++i) {
        const auto a = term(i);
        sig.push_back(a.is_atom() ? '1' : '0');
        for (std::size_t j = 0; j < terms; ++j) {
            const auto b = term(j);
            sig.push_back(a == b ? '1' : '0');
            sig.push_back(a.subset_of(b) ? '1' : '0');
            sig.push_back(a.exle(b) ? '1' : '0');
        }
    }
    return sig;
}

void check_tuple(const FiniteModel& m, const std::vector<Subset>& t) {
    for (auto s : t)
        if (!s.subset_of(m.top())) throw DomainError("efgame: tuple entry is not an element of MSO(" + std::to_string(m.atoms()) + ")");
}

struct VecHash {
    std::size_t operator()(const std::vector<int>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (int x : v) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ULL;
        return h;
    }
};

// Tuples of length l over n atoms are indexed by packing entry i into bits
// [n*i, n*(i+1)).
Subset entry(std::uint64_t index, unsigned n, std::size_t i) {
    if (n == 0) return {};
    return Subset((index >> (n * i)) & ((std::uint64_t{1} << n) - 1));
}

std::uint64_t tuple_count(unsigned n, unsigned len) { return std::uint64_t{1} << (n * len); }

void check_type_budget(unsigned m, unsigned n, unsigned k, const EfLimits& limits) {
    std::uint64_t total = 0;
    for (unsigned l = 0; l <= k; ++l) {
        if (m * l >= 62 || n * l >= 62) throw ResourceError("efgame", "tuple space exceeds the state budget");
        total += tuple_count(m, l) + tuple_count(n, l);
        if (total > limits.state_budget)
            throw ResourceError("efgame", "tuple space exceeds the state budget of " + std::to_string(limits.state_budget));
    }
}

} // namespace

bool atomic_agreement(const FiniteModel& left, const std::vector<Subset>& a, const FiniteModel& right,
                      const std::vector<Subset>& b) {
    if (a.size() != b.size()) throw DomainError("atomic_agreement: tuples differ in length");
    check_tuple(left, a);
    check_tuple(right, b);
    return signature(a.data(), a.size()) == signature(b.data(), b.size());
}

Player ef_winner(const FiniteModel& left, const FiniteModel& right, unsigned k, const EfLimits& limits) {
    check_type_budget(left.atoms(), right.atoms(), k, limits);
    const unsigned sizes[2] = {left.atoms(), right.atoms()};

    // Types of length-k tuples are their atomic signatures.
    std::vector<int> types[2];
    {
        std::vector<std::string> sigs[2];
        for (int side = 0; side < 2; ++side) {
            const unsigned n = sizes[side];
            const auto count = static_cast<std::int64_t>(tuple_count(n, k));
            sigs[side].resize(count);
#pragma omp parallel for schedule(static)
            for (std::int64_t idx = 0; idx < count; ++idx) {
                std::vector<Subset> tuple(k);
                for (unsigned i = 0; i < k; ++i) tuple[i] = entry(idx, n, i);
                sigs[side][idx] = signature(tuple.data(), k);
            }
        }
        std::unordered_map<std::string, int> ids;
        for (int side = 0; side < 2; ++side) {
            types[side].resize(sigs[side].size());
            for (std::size_t i = 0; i < sigs[side].size(); ++i)
                types[side][i] = ids.try_emplace(sigs[side][i], static_cast<int>(ids.size())).first->second;
        }
    }

    // A shorter tuple's type is the set of types of its one-step extensions.
    for (unsigned len = k; len-- > 0;) {
        std::vector<std::vector<int>> keys[2];
        for (int side = 0; side < 2; ++side) {
            const unsigned n = sizes[side];
            const auto count = static_cast<std::int64_t>(tuple_count(n, len));
            const std::uint64_t moves = std::uint64_t{1} << n;
            const auto& next = types[side];
            keys[side].resize(count);
#pragma omp parallel for schedule(static)
            for (std::int64_t idx = 0; idx < count; ++idx) {
                std::vector<int> key;
                key.reserve(moves);
                for (std::uint64_t c = 0; c < moves; ++c) key.push_back(next[idx | (c << (n * len))]);
                std::sort(key.begin(), key.end());
                key.erase(std::unique(key.begin(), key.end()), key.end());
                keys[side][idx] = std::move(key);
            }
        }
        std::unordered_map<std::vector<int>, int, VecHash> ids;
        for (int side = 0; side < 2; ++side) {
            types[side].assign(keys[side].size(), 0);
            for (std::size_t i = 0; i < keys[side].size(); ++i)
                types[side][i] = ids.try_emplace(std::move(keys[side][i]), static_cast<int>(ids.size())).first->second;
        }
    }
    return types[0][0] == types[1][0] ? Player::Duplicator : Player::Spoiler;
}

namespace {

class Minimax {
public:
    Minimax(const FiniteModel& left, const FiniteModel& right) : left_(left), right_(right) {}

    bool duplicator_wins(std::vector<Subset>& a, std::vector<Subset>& b, unsigned rounds) {
        if (rounds == 0) return signature(a.data(), a.size()) == signature(b.data(), b.size());
        std::string key = signature_key(a, b, rounds);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        bool wins = spoiler_side(a, b, left_, right_, rounds, false) && spoiler_side(a, b, right_, left_, rounds, true);
        memo_.emplace(std::move(key), wins);
        return wins;
    }

private:
    // Every Spoiler move in `from` has a reply in `to`.
    bool spoiler_side(std::vector<Subset>& a, std::vector<Subset>& b, const FiniteModel& from, const FiniteModel& to,
                      unsigned rounds, bool spoiler_on_right) {
        for (std::uint64_t c = 0; c < from.universe_size(); ++c) {
            bool answered = false;
            for (std::uint64_t d = 0; d < to.universe_size() && !answered; ++d) {
                a.push_back(Subset(spoiler_on_right ? d : c));
                b.push_back(Subset(spoiler_on_right ? c : d));
                answered = duplicator_wins(a, b, rounds - 1);
                a.pop_back();
                b.pop_back();
            }
            if (!answered) return false;
        }
        return true;
    }

    static std::string signature_key(const std::vector<Subset>& a, const std::vector<Subset>& b, unsigned rounds) {
        std::string key(reinterpret_cast<const char*>(&rounds), sizeof rounds);
        for (auto s : a) key.append(reinterpret_cast<const char*>(&s), sizeof s);
        key.push_back('|');
        for (auto s : b) key.append(reinterpret_cast<const char*>(&s), sizeof s);
        return key;
    }

    const FiniteModel& left_;
    const FiniteModel& right_;
    std::unordered_map<std::string, bool> memo_;
};

} // namespace

Player ef_winner_minimax(const FiniteModel& left, const FiniteModel& right, const GameState& start,
                         const EfLimits& limits) {
    if (start.left_tuple.size() != start.right_tuple.size()) throw DomainError("efgame: tuples differ in length");
    check_tuple(left, start.left_tuple);
    check_tuple(right, start.right_tuple);
    const std::uint64_t exponent = std::uint64_t{left.atoms() + right.atoms()} * start.rounds_remaining;
    if (exponent >= 63 || (std::uint64_t{1} << exponent) > limits.state_budget)
        throw ResourceError("efgame", "(2^m * 2^n)^k exceeds the state budget of " + std::to_string(limits.state_budget));
    Minimax solver(left, right);
    auto a = start.left_tuple;
    auto b = start.right_tuple;
    return solver.duplicator_wins(a, b, start.rounds_remaining) ? Player::Duplicator : Player::Spoiler;
}

Player ef_winner_minimax(const FiniteModel& left, const FiniteModel& right, unsigned k, const EfLimits& limits) {
    return ef_winner_minimax(left, right, GameState{{}, {}, k}, limits);
}

bool ef_equiv(unsigned m, unsigned n, unsigned k, const EfLimits& limits) {
    return ef_winner(FiniteModel(m), FiniteModel(n), k, limits) == Player::Duplicator;
}

} // namespace finord
