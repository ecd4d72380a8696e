#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/product_spec.hpp"

namespace fpwalk {

// Line-oriented product description:
//
//   [factor X1]
//   states = o1 g1 g2
//   edge o1 g1 1
//   edge g2 o1 1/2
//
//   [product]
//   alphas = 1/2 1/2
//
// '#' starts a comment.  The first state listed is the factor root.
// Probabilities are decimals or integer fractions "p/q".  Anything not in
// the grammar is rejected with line and column.

namespace detail {

struct Token {
    std::string text;
    int column;
};

inline std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) &&
               line[j] != '#')
            ++j;
        tokens.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return tokens;
}

}  // namespace detail

inline double parse_probability(const std::string& tok, int line, int col) {
    const auto bad = [&] { throw ParseError("'" + tok + "' is not a probability", line, col); };
    const std::size_t slash = tok.find('/');
    if (slash != std::string::npos) {
        const std::string num = tok.substr(0, slash), den = tok.substr(slash + 1);
        if (num.empty() || den.empty()) bad();
        for (char c : num + den)
            if (!std::isdigit(static_cast<unsigned char>(c))) bad();
        const double d = std::strtod(den.c_str(), nullptr);
        if (d == 0.0) throw ParseError("zero denominator in '" + tok + "'", line, col);
        return std::strtod(num.c_str(), nullptr) / d;
    }
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0' || v < 0.0) bad();
    return v;
}

inline FreeProductSpec parse_spec_text(const std::string& text) {
    FreeProductSpec spec;
    std::vector<double> alphas;
    bool in_product = false;
    bool saw_product = false;
    FactorChain* factor = nullptr;
    std::vector<std::vector<char>> edge_set;  // duplicate-edge tracking per factor

    std::istringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto tokens = detail::tokenize(line);
        if (tokens.empty()) continue;
        const auto& head = tokens[0];

        if (head.text.front() == '[') {
            std::string joined;
            for (const auto& t : tokens) joined += (joined.empty() ? "" : " ") + t.text;
            if (joined == "[product]") {
                if (saw_product) throw ParseError("duplicate [product] section", lineno, head.column);
                in_product = true;
                saw_product = true;
                factor = nullptr;
                continue;
            }
            if (tokens.size() == 2 && head.text == "[factor" && tokens[1].text.back() == ']') {
                const std::string name = tokens[1].text.substr(0, tokens[1].text.size() - 1);
                if (name.empty()) throw ParseError("factor needs a name", lineno, head.column);
                for (const auto& f : spec.factors)
                    if (f.name == name)
                        throw ParseError("duplicate factor '" + name + "'", lineno, head.column);
                spec.factors.emplace_back();
                spec.factors.back().name = name;
                factor = &spec.factors.back();
                edge_set.emplace_back();
                in_product = false;
                continue;
            }
            throw ParseError("unrecognised section header '" + joined + "'", lineno, head.column);
        }

        if (in_product) {
            if (head.text == "alphas" && tokens.size() >= 2 && tokens[1].text == "=") {
                if (!alphas.empty())
                    throw ParseError("alphas given twice", lineno, head.column);
                for (std::size_t i = 2; i < tokens.size(); ++i)
                    alphas.push_back(
                        parse_probability(tokens[i].text, lineno, tokens[i].column));
                if (alphas.empty())
                    throw ParseError("alphas needs at least one value", lineno, head.column);
                continue;
            }
            throw ParseError("unknown product key '" + head.text + "'", lineno, head.column);
        }

        if (!factor)
            throw ParseError("'" + head.text + "' before any section", lineno, head.column);

        if (head.text == "states" && tokens.size() >= 2 && tokens[1].text == "=") {
            if (!factor->states.empty())
                throw ParseError("states given twice for factor '" + factor->name + "'", lineno,
                                 head.column);
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                for (const auto& s : factor->states)
                    if (s == tokens[i].text)
                        throw ParseError("duplicate state '" + tokens[i].text + "'", lineno,
                                         tokens[i].column);
                factor->states.push_back(tokens[i].text);
            }
            if (factor->states.size() < 2)
                throw ParseError("factor '" + factor->name + "' needs at least 2 states", lineno,
                                 head.column);
            const int n = factor->size();
            factor->p = Eigen::MatrixXd::Zero(n, n);
            edge_set.back().assign(static_cast<std::size_t>(n) * n, 0);
            continue;
        }

        if (head.text == "edge") {
            if (factor->states.empty())
                throw ParseError("edge before states for factor '" + factor->name + "'", lineno,
                                 head.column);
            if (tokens.size() != 4)
                throw ParseError("edge needs: edge <from> <to> <probability>", lineno, head.column);
            const auto state_index = [&](const detail::Token& t) {
                for (int s = 0; s < factor->size(); ++s)
                    if (factor->states[s] == t.text) return s;
                throw ParseError("unknown state '" + t.text + "' in factor '" + factor->name + "'",
                                 lineno, t.column);
            };
            const int from = state_index(tokens[1]);
            const int to = state_index(tokens[2]);
            char& seen = edge_set.back()[static_cast<std::size_t>(from) * factor->size() + to];
            if (seen)
                throw ParseError("duplicate edge " + tokens[1].text + " -> " + tokens[2].text,
                                 lineno, head.column);
            seen = 1;
            factor->p(from, to) = parse_probability(tokens[3].text, lineno, tokens[3].column);
            continue;
        }

        throw ParseError("unknown key '" + head.text + "'", lineno, head.column);
    }

    if (spec.factors.empty()) throw ParseError("no factor sections found", lineno, 1);
    if (!saw_product) throw ParseError("missing [product] section", lineno, 1);
    if (alphas.size() != spec.factors.size())
        throw ParseError("got " + std::to_string(alphas.size()) + " alphas for " +
                             std::to_string(spec.factors.size()) + " factors",
                         lineno, 1);
    spec.alphas = alphas;
    return spec;
}

inline FreeProductSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec_text(buf.str());
}

// Inverse of the parser, mainly for tests and for exporting presets.
inline std::string render_spec(const FreeProductSpec& spec) {
    std::ostringstream out;
    out.precision(17);
    for (const auto& f : spec.factors) {
        out << "[factor " << f.name << "]\nstates =";
        for (const auto& s : f.states) out << ' ' << s;
        out << '\n';
        for (int x = 0; x < f.size(); ++x)
            for (int y = 0; y < f.size(); ++y)
                if (f.p(x, y) > 0.0)
                    out << "edge " << f.states[x] << ' ' << f.states[y] << ' ' << f.p(x, y)
                        << '\n';
        out << '\n';
    }
    out << "[product]\nalphas =";
    for (double a : spec.alphas) out << ' ' << a;
    out << '\n';
    return out.str();
}

}  // namespace fpwalk
