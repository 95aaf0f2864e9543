#pragma once
// Per-computation solver context: the tower, tuning knobs and the sticky
// incompleteness flag raised by windowed bound heuristics.

#include <string>
#include <utility>
#include <vector>

#include "pisigma/tower.hpp"

namespace pisigma {

struct Options {
    int den_window = 10;          // shift window for non-rational denominator scans
    int deg_slack = 0;            // added to degree bounds that are not provably tight
    bool rational_fast_path = true;   // one linear system on the rational base when K = Q
    bool early_abort = true;      // inside first-entry / reduced subcalls
    bool check = false;           // verify every intermediate basis
};

class Context {
public:
    explicit Context(Tower t, Options o = {}) : tower_(std::move(t)), opt_(o) {}

    const Tower& tower() const { return tower_; }
    const Options& options() const { return opt_; }

    bool bound_limited() const { return !limits_.empty(); }
    const std::vector<std::string>& limits() const { return limits_; }
    void flag(const std::string& why) {
        for (const auto& s : limits_)
            if (s == why) return;
        limits_.push_back(why);
    }

private:
    Tower tower_;
    Options opt_;
    std::vector<std::string> limits_;
};

}  // namespace pisigma
