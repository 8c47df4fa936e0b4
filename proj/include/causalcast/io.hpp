#ifndef CAUSALCAST_IO_HPP
#define CAUSALCAST_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causalcast/causal.hpp"
#include "causalcast/causal_types.hpp"
#include "causalcast/model_set.hpp"
#include "causalcast/pca.hpp"

namespace causalcast {

inline constexpr const char* kVersion = "0.1.0";

// Long-format weekly panel: unit_id,date,value,arm with arm in
// {treatment, control}. Every unit must cover the same dates exactly.
struct PanelData {
    std::vector<std::string> dates;  // ISO-8601, ascending
    Matrix treated;                  // rows x q, date order
    Matrix controls;                 // rows x c
    std::vector<std::string> treated_ids;
    std::vector<std::string> control_ids;
};

PanelData read_panel_csv(const std::string& path);
void write_panel_csv(const std::string& path, const PanelData& panel);

// Fully resolved run configuration. Everything except the data path and
// the window dates has a default.
struct RunConfig {
    std::string data_path;
    std::string train_end;        // last training date (inclusive)
    std::string transition_end;   // last transition date (inclusive)
    std::string eval_end;         // last evaluation date; empty = panel end

    std::vector<std::size_t> pc_counts = {1, 2, 3, 4};
    std::vector<std::pair<double, double>> discount_grid = {{0.99, 0.95}};
    PriorRecipe recipe;
    std::size_t init_weeks = 20;

    int draws = 10000;
    std::uint64_t seed = 20230101;
    int threads = 0;

    bool lift_window_full_post = false;  // default: evaluation window only
    LiftForm lift_form = LiftForm::total;
    Centering pca_centering = Centering::train_window;
    bool pca_standardize = false;

    std::string out_dir = "out";
};

RunConfig read_run_config(const std::string& path);
std::string run_config_to_json(const RunConfig& config);  // resolved echo
std::string run_config_hash(const RunConfig& config);

// Pivot the panel against the configured windows. Validates that the
// window dates exist in the panel and are ordered.
struct Study {
    PanelData panel;
    StudyDesign design;
};
Study resolve_study(PanelData panel, const RunConfig& config);

// Everything `fit` and `evaluate` know how to write, with the numbers
// they were computed from. Tables round-trip losslessly at 10
// significant digits and are byte-identical across reruns and thread
// counts.
struct ReportBundle {
    RunConfig config;
    std::vector<std::string> model_labels;
    std::vector<std::string> scored_dates;          // training dates that were scored
    Matrix loglik;                                  // scored steps x models
    Matrix bma_weights;                             // scored steps x models
    std::vector<std::string> lift_row_labels;       // unit ids + aggregate rows
    std::vector<std::string> lift_model_ids;        // per lift block: model or "bma"
    std::vector<std::vector<QuantileSummary>> lift_blocks;
    std::vector<std::size_t> lift_excluded;         // per block
    std::vector<std::string> correlation_unit_ids;
    Matrix correlation;                             // q x q, bma draws
    bool has_evaluation = false;
};

// Writes one CSV per table plus manifest.json into dir; returns the file
// names written.
std::vector<std::string> emit_report(const ReportBundle& bundle, const std::string& dir);

// 10-significant-digit formatting used by every table.
std::string format_number(double v);

std::vector<std::string> weekly_dates(const std::string& start_iso, std::size_t count);

}  // namespace causalcast

#endif
