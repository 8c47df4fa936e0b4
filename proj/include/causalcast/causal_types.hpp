#ifndef CAUSALCAST_CAUSAL_TYPES_HPP
#define CAUSALCAST_CAUSAL_TYPES_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "causalcast/common.hpp"

namespace causalcast {

// Study timeline: training [0, T), transition [T, T+m), evaluation
// [T+m, T+k). The transition absorbs the roll-out; lift is measured on
// the evaluation window unless configured otherwise.
struct StudyDesign {
    std::size_t train_len = 0;       // T
    std::size_t transition_len = 0;  // m
    std::size_t post_len = 0;        // k, transition included
    std::vector<std::string> treated_ids;
    std::vector<std::string> control_ids;

    std::size_t eval_len() const { return post_len - transition_len; }
    // Post-period indices (0 = first post week) of the evaluation window.
    std::vector<std::size_t> evaluation_window() const;
    std::vector<std::size_t> full_post_window() const;
    void validate() const;
};

// Monte Carlo tensor of counterfactual paths, draw-major:
// value(s, t, j) = draw s, post step t, treated unit j.
struct CounterfactualDraws {
    std::size_t num_draws = 0;   // S
    std::size_t horizon = 0;     // k
    std::size_t num_series = 0;  // q
    std::vector<double> values;  // S * k * q
    std::uint64_t seed = 0;
    std::string model_id;

    double& at(std::size_t s, std::size_t t, std::size_t j) {
        return values[(s * horizon + t) * num_series + j];
    }
    double at(std::size_t s, std::size_t t, std::size_t j) const {
        return values[(s * horizon + t) * num_series + j];
    }
    void validate() const;
};

}  // namespace causalcast

#endif
