#pragma once

#include <string>
#include <vector>

#include "fpwalk/errors.hpp"
#include "fpwalk/product_spec.hpp"

namespace fpwalk {

// Built-in inputs.  "paper-7.1" is a two-factor chain product; "paper-zz2-7.2"
// selects the group pipeline for the product of two copies of Z x Z/2.

inline FreeProductSpec preset_two_graphs() {
    FreeProductSpec spec;
    FactorChain x1;
    x1.name = "X1";
    x1.states = {"o1", "g1", "g2"};
    x1.p = Eigen::MatrixXd::Zero(3, 3);
    x1.p(0, 1) = 1.0;
    x1.p(1, 2) = 1.0;
    x1.p(2, 1) = 0.5;
    x1.p(2, 0) = 0.5;

    FactorChain x2;
    x2.name = "X2";
    x2.states = {"o2", "h1", "h2", "h3"};
    x2.p = Eigen::MatrixXd::Zero(4, 4);
    x2.p(0, 1) = 1.0;
    x2.p(1, 2) = 1.0;
    x2.p(2, 3) = 0.5;
    x2.p(2, 0) = 0.5;
    x2.p(3, 1) = 1.0;

    spec.factors = {x1, x2};
    spec.alphas = {0.5, 0.5};
    return spec;
}

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"paper-7.1", "paper-zz2-7.2"};
    return names;
}

inline bool is_group_preset(const std::string& name) { return name == "paper-zz2-7.2"; }

inline FreeProductSpec preset_spec(const std::string& name) {
    if (name == "paper-7.1") return preset_two_graphs();
    throw ValidationError("unknown chain preset '" + name + "'");
}

}  // namespace fpwalk
