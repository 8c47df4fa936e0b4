#include "causalcast/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace causalcast {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Date {
    int y = 0;
    unsigned m = 0, d = 0;
};

bool parse_iso_date(const std::string& s, Date& out) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    out.y = std::stoi(s.substr(0, 4));
    out.m = static_cast<unsigned>(std::stoi(s.substr(5, 2)));
    out.d = static_cast<unsigned>(std::stoi(s.substr(8, 2)));
    return out.m >= 1 && out.m <= 12 && out.d >= 1 && out.d <= 31;
}

// Howard Hinnant's civil-date algorithms.
long long days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097LL + doe - 719468LL;
}

void civil_from_days(long long z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long yy = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp < 10 ? mp + 3 : mp - 9;
    y = static_cast<int>(yy + (m <= 2));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    if (std::isnan(v)) return "nan";
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::vector<std::string> weekly_dates(const std::string& start_iso, std::size_t count) {
    Date d;
    if (!parse_iso_date(start_iso, d))
        throw argument_error("weekly_dates: bad ISO date " + start_iso);
    const long long start = days_from_civil(d.y, d.m, d.d);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        int y;
        unsigned m, dd;
        civil_from_days(start + 7LL * static_cast<long long>(i), y, m, dd);
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", y, m, dd);
        out.emplace_back(buf);
    }
    return out;
}

PanelData read_panel_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open panel file " + path);
    std::string line;
    if (!std::getline(in, line)) throw data_error("panel file " + path + " is empty");
    {
        auto header = split_csv_line(line);
        if (header.size() != 4 || header[0] != "unit_id" || header[1] != "date" ||
            header[2] != "value" || header[3] != "arm")
            throw data_error("panel header must be unit_id,date,value,arm");
    }

    struct UnitData {
        bool treatment = false;
        std::map<std::string, double> by_date;
    };
    std::map<std::string, UnitData> units;
    std::set<std::string> all_dates;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw data_error("line " + std::to_string(line_no) + ": expected 4 fields");
        const std::string& unit = fields[0];
        const std::string& date = fields[1];
        Date parsed;
        if (!parse_iso_date(date, parsed))
            throw data_error("line " + std::to_string(line_no) + ": bad date '" + date + "'");
        double value;
        try {
            std::size_t pos = 0;
            value = std::stod(fields[2], &pos);
            if (pos != fields[2].size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw data_error("line " + std::to_string(line_no) + ": bad value '" + fields[2] +
                             "'");
        }
        if (!(value >= 0.0) || !std::isfinite(value))
            throw data_error("line " + std::to_string(line_no) +
                             ": value must be a nonnegative real");
        bool treatment;
        if (fields[3] == "treatment")
            treatment = true;
        else if (fields[3] == "control")
            treatment = false;
        else
            throw data_error("line " + std::to_string(line_no) + ": unknown arm '" + fields[3] +
                             "' (want treatment or control)");

        UnitData& u = units[unit];
        if (u.by_date.empty())
            u.treatment = treatment;
        else if (u.treatment != treatment)
            throw data_error("line " + std::to_string(line_no) + ": unit " + unit +
                             " appears in both arms");
        if (!u.by_date.emplace(date, value).second)
            throw data_error("line " + std::to_string(line_no) + ": duplicate (unit, date) = (" +
                             unit + ", " + date + ")");
        all_dates.insert(date);
    }
    if (units.empty()) throw data_error("panel file " + path + " has no data rows");

    // Every unit must cover exactly the same dates.
    std::string ragged;
    for (const auto& [id, u] : units) {
        if (u.by_date.size() == all_dates.size()) continue;
        for (const auto& d : all_dates)
            if (!u.by_date.count(d)) {
                ragged += (ragged.empty() ? "" : "; ") + id + " missing " + d;
                break;
            }
    }
    if (!ragged.empty()) throw data_error("ragged date coverage: " + ragged);

    PanelData panel;
    panel.dates.assign(all_dates.begin(), all_dates.end());
    for (const auto& [id, u] : units)
        (u.treatment ? panel.treated_ids : panel.control_ids).push_back(id);
    if (panel.treated_ids.empty()) throw data_error("panel has no treatment units");
    if (panel.control_ids.empty()) throw data_error("panel has no control units");

    panel.treated = Matrix(panel.dates.size(), panel.treated_ids.size());
    panel.controls = Matrix(panel.dates.size(), panel.control_ids.size());
    for (std::size_t j = 0; j < panel.treated_ids.size(); ++j) {
        const auto& u = units.at(panel.treated_ids[j]);
        for (std::size_t t = 0; t < panel.dates.size(); ++t)
            panel.treated(t, j) = u.by_date.at(panel.dates[t]);
    }
    for (std::size_t j = 0; j < panel.control_ids.size(); ++j) {
        const auto& u = units.at(panel.control_ids[j]);
        for (std::size_t t = 0; t < panel.dates.size(); ++t)
            panel.controls(t, j) = u.by_date.at(panel.dates[t]);
    }
    return panel;
}

void write_panel_csv(const std::string& path, const PanelData& panel) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write panel file " + path);
    out << "unit_id,date,value,arm\n";
    for (std::size_t j = 0; j < panel.treated_ids.size(); ++j)
        for (std::size_t t = 0; t < panel.dates.size(); ++t)
            out << panel.treated_ids[j] << ',' << panel.dates[t] << ','
                << format_number(panel.treated(t, j)) << ",treatment\n";
    for (std::size_t j = 0; j < panel.control_ids.size(); ++j)
        for (std::size_t t = 0; t < panel.dates.size(); ++t)
            out << panel.control_ids[j] << ',' << panel.dates[t] << ','
                << format_number(panel.controls(t, j)) << ",control\n";
    if (!out) throw io_error("failed writing panel file " + path);
}

namespace {

void require_keys(const ordered_json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key))
            throw config_error("unknown key '" + key + "' in " + where);
}

}  // namespace

RunConfig read_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file " + path);
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const std::exception& e) {
        throw config_error(std::string("config parse failure: ") + e.what());
    }

    RunConfig cfg;
    try {
        require_keys(j, "config",
                     {"data", "windows", "model", "prior", "draws", "seed", "threads", "lift",
                      "pca", "out"});
        if (!j.contains("data")) throw config_error("config is missing required key 'data'");
        cfg.data_path = j.at("data").get<std::string>();
        if (!j.contains("windows"))
            throw config_error("config is missing required key 'windows'");
        const auto& w = j.at("windows");
        require_keys(w, "windows", {"train_end", "transition_end", "eval_end"});
        cfg.train_end = w.at("train_end").get<std::string>();
        cfg.transition_end = w.at("transition_end").get<std::string>();
        if (w.contains("eval_end")) cfg.eval_end = w.at("eval_end").get<std::string>();

        if (j.contains("model")) {
            const auto& m = j.at("model");
            require_keys(m, "model", {"pc_counts", "delta", "beta", "discount_grid"});
            if (m.contains("pc_counts"))
                cfg.pc_counts = m.at("pc_counts").get<std::vector<std::size_t>>();
            double delta = 0.99, beta = 0.95;
            if (m.contains("delta")) delta = m.at("delta").get<double>();
            if (m.contains("beta")) beta = m.at("beta").get<double>();
            cfg.discount_grid = {{delta, beta}};
            if (m.contains("discount_grid")) {
                cfg.discount_grid.clear();
                for (const auto& pair : m.at("discount_grid")) {
                    if (!pair.is_array() || pair.size() != 2)
                        throw config_error("discount_grid entries must be [delta, beta]");
                    cfg.discount_grid.emplace_back(pair[0].get<double>(),
                                                   pair[1].get<double>());
                }
            }
        }
        if (j.contains("prior")) {
            const auto& p = j.at("prior");
            require_keys(p, "prior", {"init_weeks", "c0", "df", "ridge_frac", "epsilon"});
            if (p.contains("init_weeks")) cfg.init_weeks = p.at("init_weeks").get<std::size_t>();
            if (p.contains("c0")) cfg.recipe.c0 = p.at("c0").get<double>();
            if (p.contains("df")) cfg.recipe.df = p.at("df").get<double>();
            if (p.contains("ridge_frac")) cfg.recipe.ridge_frac = p.at("ridge_frac").get<double>();
            if (p.contains("epsilon")) cfg.recipe.epsilon = p.at("epsilon").get<double>();
        }
        if (j.contains("draws")) cfg.draws = j.at("draws").get<int>();
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
        if (j.contains("lift")) {
            const auto& l = j.at("lift");
            require_keys(l, "lift", {"window", "form"});
            if (l.contains("window")) {
                const std::string w2 = l.at("window").get<std::string>();
                if (w2 == "evaluation")
                    cfg.lift_window_full_post = false;
                else if (w2 == "post")
                    cfg.lift_window_full_post = true;
                else
                    throw config_error("lift.window must be 'evaluation' or 'post'");
            }
            if (l.contains("form")) {
                const std::string f = l.at("form").get<std::string>();
                if (f == "total")
                    cfg.lift_form = LiftForm::total;
                else if (f == "weekly_average")
                    cfg.lift_form = LiftForm::weekly_average;
                else
                    throw config_error("lift.form must be 'total' or 'weekly_average'");
            }
        }
        if (j.contains("pca")) {
            const auto& p = j.at("pca");
            require_keys(p, "pca", {"centering", "standardize"});
            if (p.contains("centering")) {
                const std::string c = p.at("centering").get<std::string>();
                if (c == "train")
                    cfg.pca_centering = Centering::train_window;
                else if (c == "full")
                    cfg.pca_centering = Centering::full_window;
                else
                    throw config_error("pca.centering must be 'train' or 'full'");
            }
            if (p.contains("standardize"))
                cfg.pca_standardize = p.at("standardize").get<bool>();
        }
        if (j.contains("out")) cfg.out_dir = j.at("out").get<std::string>();
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(std::string("bad config value: ") + e.what());
    }
    if (cfg.draws < 1) throw config_error("draws must be >= 1");
    if (cfg.pc_counts.empty()) throw config_error("model.pc_counts must not be empty");
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    // `threads` is an execution detail, not part of the run identity:
    // outputs are independent of it, so it stays out of the echo and hash.
    ordered_json j;
    j["data"] = cfg.data_path;
    j["windows"] = {{"train_end", cfg.train_end}, {"transition_end", cfg.transition_end}};
    if (!cfg.eval_end.empty()) j["windows"]["eval_end"] = cfg.eval_end;
    j["model"]["pc_counts"] = cfg.pc_counts;
    ordered_json grid = ordered_json::array();
    for (const auto& [d, b] : cfg.discount_grid) grid.push_back({d, b});
    j["model"]["discount_grid"] = grid;
    j["prior"] = {{"init_weeks", cfg.init_weeks},
                  {"c0", cfg.recipe.c0},
                  {"df", cfg.recipe.df},
                  {"ridge_frac", cfg.recipe.ridge_frac},
                  {"epsilon", cfg.recipe.epsilon}};
    j["draws"] = cfg.draws;
    j["seed"] = cfg.seed;
    j["lift"] = {{"window", cfg.lift_window_full_post ? "post" : "evaluation"},
                 {"form", cfg.lift_form == LiftForm::total ? "total" : "weekly_average"}};
    j["pca"] = {{"centering",
                 cfg.pca_centering == Centering::train_window ? "train" : "full"},
                {"standardize", cfg.pca_standardize}};
    j["out"] = cfg.out_dir;
    return j.dump(2);
}

std::string run_config_hash(const RunConfig& cfg) {
    const std::string s = run_config_to_json(cfg);
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Study resolve_study(PanelData panel, const RunConfig& config) {
    const auto index_of = [&](const std::string& date, const char* what) {
        const auto it = std::find(panel.dates.begin(), panel.dates.end(), date);
        if (it == panel.dates.end())
            throw config_error(std::string(what) + " date " + date + " not found in panel");
        return static_cast<std::size_t>(it - panel.dates.begin());
    };
    const std::size_t train_idx = index_of(config.train_end, "windows.train_end");
    const std::size_t trans_idx = index_of(config.transition_end, "windows.transition_end");
    const std::size_t eval_idx = config.eval_end.empty()
                                     ? panel.dates.size() - 1
                                     : index_of(config.eval_end, "windows.eval_end");
    if (!(train_idx < trans_idx && trans_idx < eval_idx))
        throw config_error("window dates must satisfy train_end < transition_end < eval_end");

    Study study;
    study.design.train_len = train_idx + 1;
    study.design.transition_len = trans_idx - train_idx;
    study.design.post_len = eval_idx - train_idx;
    study.design.treated_ids = panel.treated_ids;
    study.design.control_ids = panel.control_ids;
    study.design.validate();

    // Rows past eval_end play no part in the study.
    const std::size_t rows = eval_idx + 1;
    panel.dates.resize(rows);
    panel.treated = panel.treated.rows_slice(0, rows);
    panel.controls = panel.controls.rows_slice(0, rows);
    study.panel = std::move(panel);
    return study;
}

namespace {

void write_trajectory_table(const std::string& path, const std::vector<std::string>& dates,
                            const std::vector<std::string>& labels, const Matrix& values) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write " + path);
    out << "date";
    for (const auto& l : labels) out << ',' << l;
    out << '\n';
    for (std::size_t t = 0; t < values.rows(); ++t) {
        out << dates[t];
        for (std::size_t i = 0; i < values.cols(); ++i)
            out << ',' << format_number(values(t, i));
        out << '\n';
    }
    if (!out) throw io_error("failed writing " + path);
}

}  // namespace

std::vector<std::string> emit_report(const ReportBundle& bundle, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir);

    std::vector<std::string> files;
    if (bundle.loglik.rows() > 0) {
        write_trajectory_table(dir + "/loglik.csv", bundle.scored_dates, bundle.model_labels,
                               bundle.loglik);
        files.push_back("loglik.csv");
        write_trajectory_table(dir + "/bma_weights.csv", bundle.scored_dates,
                               bundle.model_labels, bundle.bma_weights);
        files.push_back("bma_weights.csv");
    }
    if (bundle.has_evaluation) {
        {
            std::ofstream out(dir + "/lift_summary.csv");
            if (!out) throw io_error("cannot write lift_summary.csv");
            out << "model,name,q2.5,median,q97.5,mean,mc_se,excluded_draws\n";
            for (std::size_t b = 0; b < bundle.lift_blocks.size(); ++b) {
                const auto& block = bundle.lift_blocks[b];
                for (std::size_t r = 0; r < block.size(); ++r) {
                    const auto& s = block[r];
                    out << bundle.lift_model_ids[b] << ',' << bundle.lift_row_labels[r] << ','
                        << format_number(s.q025) << ',' << format_number(s.median) << ','
                        << format_number(s.q975) << ',' << format_number(s.mean) << ','
                        << format_number(s.mc_se) << ',' << bundle.lift_excluded[b] << '\n';
                }
            }
            if (!out) throw io_error("failed writing lift_summary.csv");
        }
        files.push_back("lift_summary.csv");
        {
            std::ofstream out(dir + "/correlation.csv");
            if (!out) throw io_error("cannot write correlation.csv");
            out << "unit";
            for (const auto& id : bundle.correlation_unit_ids) out << ',' << id;
            out << '\n';
            for (std::size_t i = 0; i < bundle.correlation.rows(); ++i) {
                out << bundle.correlation_unit_ids[i];
                for (std::size_t j = 0; j < bundle.correlation.cols(); ++j)
                    out << ',' << format_number(bundle.correlation(i, j));
                out << '\n';
            }
            if (!out) throw io_error("failed writing correlation.csv");
        }
        files.push_back("correlation.csv");
    }

    ordered_json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = bundle.config.seed;
    manifest["draws"] = bundle.config.draws;
    manifest["config"] = ordered_json::parse(run_config_to_json(bundle.config));
    manifest["config_hash"] = run_config_hash(bundle.config);
    manifest["models"] = bundle.model_labels;
    manifest["files"] = files;
    std::ofstream mf(dir + "/manifest.json");
    if (!mf) throw io_error("cannot write manifest.json");
    mf << manifest.dump(2) << '\n';
    if (!mf) throw io_error("failed writing manifest.json");
    files.push_back("manifest.json");
    return files;
}

}  // namespace causalcast
