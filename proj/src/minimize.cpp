#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

#include "finord/automata.hpp"

namespace finord {

namespace {

using State = Dfa::State;

struct VecHash {
    std::size_t operator()(const std::vector<State>& v) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto x : v) h = (h ^ x) * 0x100000001b3ULL;
        return h;
    }
};

// Quotient by a congruence given as a block per state; blocks are numbered
// in breadth-first order from the initial state.
Dfa quotient(const Dfa& a, const std::vector<State>& block) {
    const std::uint32_t letters = a.letters();
    std::unordered_map<State, State> number;  // block -> new state
    std::vector<State> representative;
    auto visit = [&](State s) {
        auto [it, fresh] = number.try_emplace(block[s], static_cast<State>(representative.size()));
        if (fresh) representative.push_back(s);
        return it->second;
    };
    visit(a.initial());
    std::vector<State> delta;
    std::vector<bool> acc;
    for (std::size_t i = 0; i < representative.size(); ++i) {
        const State s = representative[i];
        acc.push_back(a.accepting(s));
        for (std::uint32_t l = 0; l < letters; ++l) delta.push_back(visit(a.next(s, l)));
    }
    return Dfa(a.tracks(), std::move(delta), 0, std::move(acc));
}

// Restriction to states reachable from the initial one.
Dfa trim(const Dfa& a) {
    std::vector<State> block(a.states());
    for (State s = 0; s < a.states(); ++s) block[s] = s;
    return quotient(a, block);
}

} // namespace

Dfa minimize(const Dfa& input) {
    const Dfa a = trim(input);
    const std::size_t n = a.states();
    const std::uint32_t letters = a.letters();
    std::vector<State> block(n);
    std::size_t blocks = 0;
    {
        bool seen[2] = {false, false};
        for (State s = 0; s < n; ++s) {
            block[s] = a.accepting(s) ? 1 : 0;
            seen[block[s]] = true;
        }
        blocks = seen[0] + seen[1];
    }
    std::vector<std::vector<State>> signature(n);
    for (;;) {
        const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) {
            auto& sig = signature[i];
            sig.resize(letters + 1);
            sig[0] = block[i];
            for (std::uint32_t l = 0; l < letters; ++l) sig[l + 1] = block[a.next(static_cast<State>(i), l)];
        }
        std::unordered_map<std::vector<State>, State, VecHash> ids;
        std::vector<State> refined(n);
        for (State s = 0; s < n; ++s)
            refined[s] = ids.try_emplace(signature[s], static_cast<State>(ids.size())).first->second;
        block = std::move(refined);
        if (ids.size() == blocks) break;
        blocks = ids.size();
    }
    return quotient(a, block);
}

Dfa minimize_reference(const Dfa& input) {
    const Dfa a = trim(input);
    const std::size_t n = a.states();
    const std::uint32_t letters = a.letters();

    std::vector<std::vector<State>> inverse(static_cast<std::size_t>(letters) * n);
    for (State s = 0; s < n; ++s)
        for (std::uint32_t l = 0; l < letters; ++l) inverse[static_cast<std::size_t>(l) * n + a.next(s, l)].push_back(s);

    std::vector<std::vector<State>> blocks;
    std::vector<std::size_t> block_of(n);
    {
        std::vector<State> acc, rej;
        for (State s = 0; s < n; ++s) (a.accepting(s) ? acc : rej).push_back(s);
        for (auto* part : {&acc, &rej})
            if (!part->empty()) {
                for (auto s : *part) block_of[s] = blocks.size();
                blocks.push_back(std::move(*part));
            }
    }
    std::set<std::pair<std::size_t, std::uint32_t>> work;
    if (blocks.size() == 2) {
        const std::size_t smaller = blocks[0].size() <= blocks[1].size() ? 0 : 1;
        for (std::uint32_t l = 0; l < letters; ++l) work.emplace(smaller, l);
    }

    std::vector<bool> marked(n);
    while (!work.empty()) {
        const auto [splitter, letter] = *work.begin();
        work.erase(work.begin());
        std::vector<State> pre;
        for (auto q : blocks[splitter])
            for (auto p : inverse[static_cast<std::size_t>(letter) * n + q])
                if (!marked[p]) {
                    marked[p] = true;
                    pre.push_back(p);
                }
        std::unordered_map<std::size_t, std::vector<State>> hit;
        for (auto p : pre) hit[block_of[p]].push_back(p);
        std::vector<std::size_t> touched;
        for (const auto& entry : hit) touched.push_back(entry.first);
        std::sort(touched.begin(), touched.end());
        for (auto y : touched) {
            auto& inside = hit[y];
            if (inside.size() == blocks[y].size()) continue;
            const std::size_t z = blocks.size();
            std::vector<State> outside;
            for (auto s : blocks[y])
                if (!marked[s]) outside.push_back(s);
            for (auto s : inside) block_of[s] = z;
            blocks[y] = std::move(outside);
            blocks.push_back(std::move(inside));
            for (std::uint32_t l = 0; l < letters; ++l) {
                if (work.count({y, l}))
                    work.emplace(z, l);
                else
                    work.emplace(blocks[y].size() <= blocks[z].size() ? y : z, l);
            }
        }
        for (auto p : pre) marked[p] = false;
    }
    std::vector<State> block(n);
    for (State s = 0; s < n; ++s) block[s] = static_cast<State>(block_of[s]);
    return quotient(a, block);
}

} // namespace finord
