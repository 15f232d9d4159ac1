#include "finord/automata.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_map>

#include "finord/errors.hpp"

namespace finord {

Dfa::Dfa(std::vector<std::string> tracks, std::vector<State> delta, State initial, std::vector<bool> accepting)
    : tracks_(std::move(tracks)), delta_(std::move(delta)), initial_(initial), accepting_(std::move(accepting)) {
    if (!std::is_sorted(tracks_.begin(), tracks_.end()) ||
        std::adjacent_find(tracks_.begin(), tracks_.end()) != tracks_.end())
        throw DomainError("Dfa: track names must be sorted and distinct");
    if (tracks_.size() > 30) throw DomainError("Dfa: too many tracks");
    if (accepting_.empty()) throw DomainError("Dfa: no states");
    if (delta_.size() != accepting_.size() * letters()) throw DomainError("Dfa: transition table is not total");
    if (initial_ >= accepting_.size()) throw DomainError("Dfa: initial state out of range");
    for (auto t : delta_)
        if (t >= accepting_.size()) throw DomainError("Dfa: transition target out of range");
}

Dfa Dfa::constant(bool accept) { return Dfa({}, {0}, 0, {accept}); }

bool Dfa::accepts(const std::vector<Letter>& word) const {
    State s = initial_;
    for (auto l : word) {
        if (l >= letters()) throw DomainError("Dfa::accepts: letter outside the alphabet");
        s = next(s, l);
    }
    return accepting_[s];
}

int Dfa::track_index(const std::string& name) const {
    auto it = std::lower_bound(tracks_.begin(), tracks_.end(), name);
    return it != tracks_.end() && *it == name ? static_cast<int>(it - tracks_.begin()) : -1;
}

namespace {

struct VecHash {
    std::size_t operator()(const std::vector<Dfa::State>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto x : v) h = (h ^ x) * 0x100000001b3ULL;
        return h;
    }
};

void check_cap(std::size_t states, const AutomataLimits& limits, const char* stage) {
    if (states > limits.state_cap)
        throw ResourceError(stage, "state cap of " + std::to_string(limits.state_cap) + " exceeded");
}

std::vector<std::string> track_union(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// For every letter over `wide`, the letter it restricts to over `narrow`.
std::vector<Dfa::Letter> restriction_table(const std::vector<std::string>& wide, const std::vector<std::string>& narrow) {
    std::vector<int> pos;
    for (const auto& t : narrow) pos.push_back(static_cast<int>(std::lower_bound(wide.begin(), wide.end(), t) - wide.begin()));
    const std::uint32_t letters = std::uint32_t{1} << wide.size();
    std::vector<Dfa::Letter> table(letters);
    for (std::uint32_t l = 0; l < letters; ++l) {
        Dfa::Letter r = 0;
        for (std::size_t i = 0; i < pos.size(); ++i) r |= ((l >> pos[i]) & 1U) << i;
        table[l] = r;
    }
    return table;
}

void check_width(std::size_t width, const AutomataLimits& limits, const char* stage) {
    if (width > limits.max_width)
        throw ResourceError(stage, "alphabet of " + std::to_string(width) + " tracks exceeds the width bound " +
                                       std::to_string(limits.max_width));
}

bool apply(BoolOp op, bool x, bool y) {
    switch (op) {
    case BoolOp::And: return x && y;
    case BoolOp::Or: return x || y;
    case BoolOp::Implies: return !x || y;
    default: return x == y;
    }
}

// Reachable product over the union of the track lists; accepting states are
// decided by `accept`.
Dfa product(const Dfa& a, const Dfa& b, const std::function<bool(bool, bool)>& accept, const AutomataLimits& limits,
            const char* stage) {
    auto tracks = track_union(a.tracks(), b.tracks());
    check_width(tracks.size(), limits, stage);
    const auto ra = restriction_table(tracks, a.tracks());
    const auto rb = restriction_table(tracks, b.tracks());
    const std::uint32_t letters = std::uint32_t{1} << tracks.size();

    std::unordered_map<std::uint64_t, Dfa::State> index;
    std::vector<std::pair<Dfa::State, Dfa::State>> pairs;
    auto intern = [&](Dfa::State x, Dfa::State y) {
        const std::uint64_t key = (std::uint64_t{x} << 32) | y;
        auto [it, fresh] = index.try_emplace(key, static_cast<Dfa::State>(pairs.size()));
        if (fresh) {
            pairs.emplace_back(x, y);
            check_cap(pairs.size(), limits, stage);
        }
        return it->second;
    };
    intern(a.initial(), b.initial());
    std::vector<Dfa::State> delta;
    std::vector<bool> acc;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [x, y] = pairs[i];
        acc.push_back(accept(a.accepting(x), b.accepting(y)));
        for (std::uint32_t l = 0; l < letters; ++l) delta.push_back(intern(a.next(x, ra[l]), b.next(y, rb[l])));
    }
    return Dfa(std::move(tracks), std::move(delta), 0, std::move(acc));
}

} // namespace

Dfa combine(const Dfa& a, const Dfa& b, BoolOp op, const AutomataLimits& limits) {
    return minimize(product(a, b, [op](bool x, bool y) { return apply(op, x, y); }, limits, "combine"));
}

Dfa complement(const Dfa& a) {
    std::vector<bool> acc(a.states());
    for (std::size_t s = 0; s < a.states(); ++s) acc[s] = !a.accepting(static_cast<Dfa::State>(s));
    return Dfa(a.tracks(), a.transitions(), a.initial(), std::move(acc));
}

Dfa cylindrify(const Dfa& a, const std::vector<std::string>& extra, const AutomataLimits& limits) {
    auto sorted = extra;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    auto tracks = track_union(a.tracks(), sorted);
    check_width(tracks.size(), limits, "cylindrify");
    const auto r = restriction_table(tracks, a.tracks());
    const std::uint32_t letters = std::uint32_t{1} << tracks.size();
    std::vector<Dfa::State> delta;
    delta.reserve(a.states() * letters);
    std::vector<bool> acc(a.states());
    for (Dfa::State s = 0; s < a.states(); ++s) {
        acc[s] = a.accepting(s);
        for (std::uint32_t l = 0; l < letters; ++l) delta.push_back(a.next(s, r[l]));
    }
    return Dfa(std::move(tracks), std::move(delta), a.initial(), std::move(acc));
}

Dfa project(const Dfa& a, const std::string& track, const AutomataLimits& limits) {
    const int t = a.track_index(track);
    if (t < 0) throw DomainError("project: no track named '" + track + "'");
    auto tracks = a.tracks();
    tracks.erase(tracks.begin() + t);
    const std::uint32_t letters = std::uint32_t{1} << tracks.size();
    const std::uint32_t low_mask = (std::uint32_t{1} << t) - 1;

    std::unordered_map<std::vector<Dfa::State>, Dfa::State, VecHash> index;
    std::vector<std::vector<Dfa::State>> sets;
    auto intern = [&](std::vector<Dfa::State> set) {
        auto [it, fresh] = index.try_emplace(set, static_cast<Dfa::State>(sets.size()));
        if (fresh) {
            sets.push_back(std::move(set));
            check_cap(sets.size(), limits, "project");
        }
        return it->second;
    };
    intern({a.initial()});
    std::vector<Dfa::State> delta;
    std::vector<bool> acc;
    std::vector<Dfa::State> succ;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        const auto current = sets[i];
        acc.push_back(std::any_of(current.begin(), current.end(), [&](Dfa::State s) { return a.accepting(s); }));
        for (std::uint32_t l = 0; l < letters; ++l) {
            const std::uint32_t zero = (l & low_mask) | ((l & ~low_mask) << 1);
            const std::uint32_t one = zero | (std::uint32_t{1} << t);
            succ.clear();
            for (auto s : current) {
                succ.push_back(a.next(s, zero));
                succ.push_back(a.next(s, one));
            }
            std::sort(succ.begin(), succ.end());
            succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
            delta.push_back(intern(succ));
        }
    }
    return minimize(Dfa(std::move(tracks), std::move(delta), 0, std::move(acc)));
}

bool all_reachable(const Dfa& a) {
    std::vector<bool> seen(a.states());
    std::deque<Dfa::State> queue{a.initial()};
    seen[a.initial()] = true;
    std::size_t count = 1;
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        for (std::uint32_t l = 0; l < a.letters(); ++l) {
            auto t = a.next(s, l);
            if (!seen[t]) {
                seen[t] = true;
                ++count;
                queue.push_back(t);
            }
        }
    }
    return count == a.states();
}

bool is_empty(const Dfa& a) {
    std::vector<bool> seen(a.states());
    std::deque<Dfa::State> queue{a.initial()};
    seen[a.initial()] = true;
    while (!queue.empty()) {
        auto s = queue.front();
        queue.pop_front();
        if (a.accepting(s)) return false;
        for (std::uint32_t l = 0; l < a.letters(); ++l) {
            auto t = a.next(s, l);
            if (!seen[t]) {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    return true;
}

bool equivalent(const Dfa& a, const Dfa& b, const AutomataLimits& limits) {
    return is_empty(product(a, b, [](bool x, bool y) { return x != y; }, limits, "equivalent"));
}

UPSet lasso_spectrum(const Dfa& a) {
    if (a.width() != 0) throw DomainError("lasso_spectrum: automaton has tracks; expected a sentence automaton");
    std::vector<long> position(a.states(), -1);
    std::vector<bool> accepted;
    Dfa::State s = a.initial();
    while (position[s] < 0) {
        position[s] = static_cast<long>(accepted.size());
        accepted.push_back(a.accepting(s));
        s = a.next(s, 0);
    }
    const auto tail = static_cast<std::uint64_t>(position[s]);
    const auto cycle = accepted.size() - tail;
    std::set<std::uint64_t> init, residues;
    for (std::uint64_t i = 0; i < tail; ++i)
        if (accepted[i]) init.insert(i);
    for (std::uint64_t i = tail; i < accepted.size(); ++i)
        if (accepted[i]) residues.insert(i % cycle);
    return canonicalize(UPSet(std::move(init), tail, cycle, std::move(residues)));
}

Dfa unary_dfa(const UPSet& s) {
    const auto n = s.threshold();
    const auto d = s.period();
    const std::size_t count = n + d;
    std::vector<Dfa::State> delta(count);
    std::vector<bool> acc(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        delta[i] = static_cast<Dfa::State>(i + 1 < count ? i + 1 : n);
        acc[i] = s.member(i);
    }
    return Dfa({}, std::move(delta), 0, std::move(acc));
}

Dfa concatenate_unary(const Dfa& a, const Dfa& b, const AutomataLimits& limits) {
    if (a.width() != 0 || b.width() != 0) throw DomainError("concatenate_unary: automata must have no tracks");
    // A state is the position in a together with the set of positions in b
    // reachable after some split of the word read so far.
    using Key = std::vector<Dfa::State>;
    std::unordered_map<Key, Dfa::State, VecHash> index;
    std::vector<Key> keys;
    auto intern = [&](Key k) {
        auto [it, fresh] = index.try_emplace(k, static_cast<Dfa::State>(keys.size()));
        if (fresh) {
            keys.push_back(std::move(k));
            check_cap(keys.size(), limits, "minkowski_sum");
        }
        return it->second;
    };
    auto with_start = [&](Dfa::State pos_a, Key bs) {
        if (a.accepting(pos_a)) bs.push_back(b.initial());
        std::sort(bs.begin(), bs.end());
        bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
        bs.insert(bs.begin(), pos_a);
        return bs;
    };
    intern(with_start(a.initial(), {}));
    std::vector<Dfa::State> delta;
    std::vector<bool> acc;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const Key current = keys[i];
        bool accept = false;
        Key next_b;
        for (std::size_t j = 1; j < current.size(); ++j) {
            accept = accept || b.accepting(current[j]);
            next_b.push_back(b.next(current[j], 0));
        }
        acc.push_back(accept);
        delta.push_back(intern(with_start(a.next(current[0], 0), std::move(next_b))));
    }
    return minimize(Dfa({}, std::move(delta), 0, std::move(acc)));
}

namespace {

// Covers the letters of `in` by cubes, splitting on the highest track first.
void cover(const std::vector<bool>& in, unsigned width, unsigned bit, std::uint32_t fixed, std::uint32_t fixed_mask,
           std::vector<std::string>& out) {
    bool all = true, none = true;
    const std::uint32_t free_bits = (std::uint32_t{1} << bit) - 1;
    for (std::uint32_t rest = 0; rest <= free_bits; ++rest) {
        const bool hit = in[fixed | rest];
        all = all && hit;
        none = none && !hit;
        if (!all && !none) break;
    }
    if (none) return;
    if (all) {
        std::string label;
        for (unsigned i = 0; i < width; ++i) {
            if ((fixed_mask >> i) & 1U)
                label += ((fixed >> i) & 1U) ? "1" : "0";
            else
                label += "·";
        }
        out.push_back(label.empty() ? "ε" : label);
        return;
    }
    const unsigned b = bit - 1;
    cover(in, width, b, fixed, fixed_mask | (1U << b), out);
    cover(in, width, b, fixed | (1U << b), fixed_mask | (1U << b), out);
}

} // namespace

std::string to_dot(const Dfa& a) {
    std::ostringstream out;
    out << "digraph dfa {\n  rankdir=LR;\n";
    out << "  label=\"tracks:";
    for (const auto& t : a.tracks()) out << ' ' << t;
    out << "\";\n  node [shape=circle];\n  start [shape=point];\n  start -> q" << a.initial() << ";\n";
    for (Dfa::State s = 0; s < a.states(); ++s)
        out << "  q" << s << " [shape=" << (a.accepting(s) ? "doublecircle" : "circle") << "];\n";
    for (Dfa::State s = 0; s < a.states(); ++s) {
        std::map<Dfa::State, std::vector<bool>> by_target;
        for (std::uint32_t l = 0; l < a.letters(); ++l) {
            auto& row = by_target[a.next(s, l)];
            row.resize(a.letters());
            row[l] = true;
        }
        for (const auto& [target, letters] : by_target) {
            std::vector<std::string> cubes;
            cover(letters, a.width(), a.width(), 0, 0, cubes);
            out << "  q" << s << " -> q" << target << " [label=\"";
            for (std::size_t i = 0; i < cubes.size(); ++i) out << (i ? "\\n" : "") << cubes[i];
            out << "\"];\n";
        }
    }
    out << "}\n";
    return out.str();
}

} // namespace finord
