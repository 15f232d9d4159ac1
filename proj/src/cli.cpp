#include "finord/cli.hpp"

#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "finord/compile.hpp"
#include "finord/efgame.hpp"
#include "finord/errors.hpp"
#include "finord/model.hpp"
#include "finord/types0.hpp"
#include "finord/upset.hpp"

namespace finord {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::uint64_t>& xs) {
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out + "}";
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string current;
    std::istringstream in(text);
    while (std::getline(in, current, sep)) parts.push_back(current);
    return parts;
}

AutomataLimits limits_from_env() {
    AutomataLimits limits;
    if (const char* cap = std::getenv("FINORD_STATE_CAP"); cap && *cap) {
        char* end = nullptr;
        const auto value = std::strtoull(cap, &end, 10);
        if (*end != '\0' || value == 0) throw UsageError("FINORD_STATE_CAP must be a positive integer");
        limits.state_cap = value;
    }
    return limits;
}

// A subcommand taking one formula, either inline or one per line of --file.
struct FormulaCommand {
    std::string formula;
    std::string file;
    std::function<std::string(const Formula&)> action;
};

int run_formula_command(const FormulaCommand& cmd, std::ostream& out, std::ostream& err) {
    if (cmd.file.empty()) {
        if (cmd.formula.empty()) throw UsageError("expected a formula argument or --file");
        out << cmd.action(parse_formula(cmd.formula)) << '\n';
        return 0;
    }
    if (!cmd.formula.empty()) throw UsageError("give either a formula or --file, not both");
    std::ifstream in(cmd.file);
    if (!in) throw UsageError("cannot read " + cmd.file);
    // Blank lines are skipped but still counted for error messages.
    std::vector<std::string> lines;
    std::vector<std::size_t> line_numbers;
    std::size_t number = 0;
    for (std::string line; std::getline(in, line);) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        lines.push_back(line);
        line_numbers.push_back(number);
    }

    std::vector<std::string> results(lines.size());
    std::vector<char> failed(lines.size(), 0);
    const auto count = static_cast<std::int64_t>(lines.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            results[i] = cmd.action(parse_formula(lines[i]));
        } catch (const std::exception& e) {
            results[i] = e.what();
            failed[i] = 1;
        }
    }
    int status = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (failed[i]) {
            out << "error\n";
            err << "line " << line_numbers[i] << ": " << results[i] << '\n';
            status = 1;
        } else {
            out << results[i] << '\n';
        }
    }
    return status;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decision procedures for monadic second-order sentences over finite linear orders"};
    app.name("finord");
    app.require_subcommand(1);

    AutomataLimits limits;

    auto add_formula_command = [&](const std::string& name, const std::string& help, FormulaCommand& cmd) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("formula", cmd.formula, "Formula text");
        sub->add_option("--file", cmd.file, "Read one formula per line");
        return sub;
    };

    FormulaCommand eval_cmd, spectrum_cmd, valid_cmd, normal_cmd, decide_cmd, compile_cmd;
    unsigned eval_n = 0;
    std::string point_text;
    bool dot = false;

    auto* eval = add_formula_command("eval", "Truth value in MSO(n)", eval_cmd);
    eval->add_option("--n", eval_n, "Number of atoms")->required();
    eval_cmd.action = [&](const Formula& f) {
        if (!is_sentence(f)) throw DomainError("eval: formula has free variables");
        return std::string(evaluate(FiniteModel(eval_n), f) ? "true" : "false");
    };

    add_formula_command("spectrum", "Set of atom counts of the finite models", spectrum_cmd);
    spectrum_cmd.action = [&](const Formula& f) { return to_string(spectrum(f, limits)); };

    add_formula_command("valid", "Truth in every finite model", valid_cmd);
    valid_cmd.action = [&](const Formula& f) {
        const auto s = spectrum(f, limits);
        if (s == UPSet::naturals()) return std::string("valid");
        const auto counter = complement(s).min_element();
        return "invalid: countermodel size " + std::to_string(*counter);
    };

    add_formula_command("normalform", "Threshold, period and exact/periodic parts of the spectrum", normal_cmd);
    normal_cmd.action = [&](const Formula& f) {
        const auto nf = to_normal_form(spectrum(f, limits));
        return "N=" + std::to_string(nf.threshold) + " d=" + std::to_string(nf.period) + " i_set=" + join(nf.i_set) +
               " r_set=" + join(nf.r_set);
    };

    auto* decide = add_formula_command("decide", "Truth at a completion", decide_cmd);
    decide->add_option("--point", point_text, "fin:<n>, inf:zero+<c> or inf:<p>^<j>=<r>;...")->required();
    decide_cmd.action = [&](const Formula& f) { return to_string(point_models(parse_point(point_text), f, limits)); };

    auto* compile_sub = add_formula_command("compile", "Minimal automaton of a formula", compile_cmd);
    compile_sub->add_flag("--dot", dot, "Print Graphviz text");
    compile_cmd.action = [&](const Formula& f) {
        const auto dfa = compile(f, limits);
        if (dot) {
            auto text = to_dot(dfa);
            text.pop_back();
            return text;
        }
        std::string tracks;
        for (const auto& t : dfa.tracks()) tracks += (tracks.empty() ? "" : ",") + t;
        return "states=" + std::to_string(dfa.states()) + " tracks=[" + tracks + "]";
    };

    std::string points_text;
    auto* mul = app.add_subcommand("mul", "Product of completions");
    mul->add_option("--points", points_text, "Comma-separated points")->required();

    unsigned left = 0, right = 0, rounds = 0;
    auto* efgame = app.add_subcommand("efgame", "Winner of the unnested game on MSO(m), MSO(n)");
    efgame->add_option("--left", left, "Atoms on the left")->required();
    efgame->add_option("--right", right, "Atoms on the right")->required();
    efgame->add_option("--rounds", rounds, "Number of rounds")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        limits = limits_from_env();
        for (auto [sub, cmd] : std::initializer_list<std::pair<CLI::App*, FormulaCommand*>>{
                 {eval, &eval_cmd},
                 {app.get_subcommand("spectrum"), &spectrum_cmd},
                 {app.get_subcommand("valid"), &valid_cmd},
                 {app.get_subcommand("normalform"), &normal_cmd},
                 {decide, &decide_cmd},
                 {compile_sub, &compile_cmd}})
            if (sub->parsed()) return run_formula_command(*cmd, out, err);
        if (mul->parsed()) {
            auto parts = split(points_text, ',');
            if (parts.empty()) throw UsageError("--points needs at least one point");
            auto product = parse_point(parts[0]);
            for (std::size_t i = 1; i < parts.size(); ++i) product = point_mul(product, parse_point(parts[i]));
            out << to_string(product) << '\n';
            return 0;
        }
        if (efgame->parsed()) {
            out << to_string(ef_winner(FiniteModel(left), FiniteModel(right), rounds)) << '\n';
            return 0;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace finord
