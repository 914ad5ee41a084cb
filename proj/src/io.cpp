#include "histoclust/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <variant>

namespace histoclust::io {

json histogram_to_json(const Histogram& h) {
    json bins = json::array();
    for (const auto& b : h.bins()) bins.push_back({b.lower, b.upper, b.weight});
    return json{{"bins", std::move(bins)}};
}

Histogram histogram_from_json(const json& j) {
    if (!j.is_object() || !j.contains("bins") || !j["bins"].is_array())
        throw ParseError("histogram must be an object with a \"bins\" array");
    std::vector<Bin> bins;
    for (const auto& b : j["bins"]) {
        if (!b.is_array() || b.size() != 3)
            throw ParseError("each bin must be a [lower, upper, weight] triple");
        bins.push_back({b[0].get<double>(), b[1].get<double>(), b[2].get<double>()});
    }
    return Histogram::from_bins(std::move(bins));
}

json matrix_to_json(const HistogramMatrix& m) {
    json objects = json::array();
    for (std::size_t i = 0; i < m.n(); ++i) {
        json cells = json::array();
        for (std::size_t j = 0; j < m.p(); ++j) cells.push_back(histogram_to_json(m.cell(i, j)));
        objects.push_back({{"id", m.object_ids()[i]}, {"cells", std::move(cells)}});
    }
    return json{{"variables", m.variable_names()}, {"objects", std::move(objects)}};
}

HistogramMatrix matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("variables") || !j.contains("objects"))
        throw ParseError("matrix must be an object with \"variables\" and \"objects\"");
    std::vector<std::string> vars = j["variables"].get<std::vector<std::string>>();
    std::vector<std::string> ids;
    std::vector<std::vector<Histogram>> cells;
    for (const auto& o : j["objects"]) {
        if (!o.is_object() || !o.contains("id") || !o.contains("cells"))
            throw ParseError("each object needs \"id\" and \"cells\"");
        ids.push_back(o["id"].get<std::string>());
        std::vector<Histogram> row;
        for (const auto& c : o["cells"]) row.push_back(histogram_from_json(c));
        if (row.size() != vars.size())
            throw ParseError("object " + ids.back() + " has " + std::to_string(row.size()) +
                             " cells for " + std::to_string(vars.size()) + " variables");
        cells.push_back(std::move(row));
    }
    return HistogramMatrix(std::move(vars), std::move(ids), std::move(cells));
}

HistogramMatrix matrix_from_samples_csv(std::istream& in, std::size_t num_bins) {
    std::map<std::string, std::size_t> obj_index, var_index;
    std::vector<std::string> ids, vars;
    std::vector<std::vector<std::vector<double>>> samples;  // object x variable

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string id, var, val;
        if (!std::getline(ss, id, ',') || !std::getline(ss, var, ',') || !std::getline(ss, val))
            throw ParseError("line " + std::to_string(lineno) +
                             ": expected `object_id,variable,value`");
        double v;
        try {
            v = std::stod(val);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header row
            throw ParseError("line " + std::to_string(lineno) + ": bad number `" + val + "`");
        }
        auto [oi, onew] = obj_index.try_emplace(id, ids.size());
        if (onew) {
            ids.push_back(id);
            samples.emplace_back();
        }
        auto [vi, vnew] = var_index.try_emplace(var, vars.size());
        if (vnew) vars.push_back(var);
        auto& per_obj = samples[oi->second];
        if (per_obj.size() <= vi->second) per_obj.resize(vars.size());
        per_obj[vi->second].push_back(v);
    }
    if (ids.empty()) throw ParseError("no data rows in samples CSV");

    std::vector<std::vector<Histogram>> cells;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (samples[i].size() != vars.size())
            samples[i].resize(vars.size());
        std::vector<Histogram> row;
        for (std::size_t j = 0; j < vars.size(); ++j) {
            if (samples[i][j].empty())
                throw ParseError("object " + ids[i] + " has no samples for variable " + vars[j]);
            row.push_back(Histogram::from_samples(std::move(samples[i][j]), num_bins));
        }
        cells.push_back(std::move(row));
    }
    return HistogramMatrix(std::move(vars), std::move(ids), std::move(cells));
}

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    return out;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

HistogramMatrix load_matrix(const std::string& path, std::size_t num_bins) {
    auto in = open_input(path);
    if (has_suffix(path, ".json")) {
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ParseError(path + ": " + e.what());
        }
        return matrix_from_json(j);
    }
    return matrix_from_samples_csv(in, num_bins);
}

json result_to_json(const ClusteringResult& result, const HistogramMatrix& matrix) {
    json assignment = json::array();
    for (std::size_t i = 0; i < matrix.n(); ++i)
        assignment.push_back({{"id", matrix.object_ids()[i]},
                              {"cluster", result.partition.assignment[i]}});
    json weights;
    weights["scheme"] = scheme_name(result.weights.scheme);
    weights["mean"] = result.weights.mean_weights;
    weights["dispersion"] = result.weights.disp_weights;
    return json{{"k", result.partition.k},
                {"scheme", scheme_name(result.weights.scheme)},
                {"criterion", result.criterion},
                {"criterion_trace", result.criterion_trace},
                {"iterations", result.iterations},
                {"converged", result.converged},
                {"seed", result.seed},
                {"restarts", result.restarts_run},
                {"cluster_sizes", result.partition.sizes()},
                {"weights", std::move(weights)},
                {"assignment", std::move(assignment)}};
}

namespace {

json knots_json(const Histogram& h) {
    return json{{"t", h.knot_t()}, {"q", h.knot_q()}, {"mean", h.mean()}, {"std", h.stddev()}};
}

}  // namespace

json prototypes_to_json(const ClusteringResult& result,
                        const std::vector<Histogram>& general_prototype,
                        const std::vector<std::string>& variable_names) {
    json clusters = json::array();
    for (std::size_t k = 0; k < result.prototypes.size(); ++k) {
        json per_var;
        for (std::size_t j = 0; j < variable_names.size(); ++j)
            per_var[variable_names[j]] = knots_json(result.prototypes[k][j]);
        clusters.push_back({{"cluster", k}, {"prototype", std::move(per_var)}});
    }
    json general;
    for (std::size_t j = 0; j < variable_names.size(); ++j)
        general[variable_names[j]] = knots_json(general_prototype[j]);
    return json{{"clusters", std::move(clusters)}, {"general", std::move(general)}};
}

namespace {

json opt_json(const std::optional<double>& v) {
    if (!v) return nullptr;
    return *v;
}

json block_json(const QpiReport::ComponentBlock& b, const std::vector<std::string>& vars) {
    json cells;
    for (std::size_t j = 0; j < b.cell.size(); ++j) {
        json row = json::array();
        for (const auto& c : b.cell[j]) row.push_back(opt_json(c));
        cells[vars[j]] = std::move(row);
    }
    json per_cluster = json::array();
    for (const auto& c : b.per_cluster) per_cluster.push_back(opt_json(c));
    json per_variable;
    for (std::size_t j = 0; j < b.per_variable.size(); ++j)
        per_variable[vars[j]] = opt_json(b.per_variable[j]);
    return json{{"cells", std::move(cells)},
                {"per_cluster", std::move(per_cluster)},
                {"per_variable", std::move(per_variable)},
                {"global", opt_json(b.global)}};
}

std::string fmt_cell(const std::optional<double>& v) {
    if (!v) return "n/a";
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << *v;
    return os.str();
}

void block_text(std::ostream& os, const std::string& title, const QpiReport::ComponentBlock& b,
                const std::vector<std::string>& vars) {
    const std::size_t kk = b.per_cluster.size();
    os << title << "\n";
    os << std::left << std::setw(12) << "variable";
    for (std::size_t k = 0; k < kk; ++k)
        os << std::right << std::setw(10) << ("C" + std::to_string(k + 1));
    os << std::right << std::setw(10) << "all" << "\n";
    for (std::size_t j = 0; j < vars.size(); ++j) {
        os << std::left << std::setw(12) << vars[j];
        for (std::size_t k = 0; k < kk; ++k) os << std::right << std::setw(10) << fmt_cell(b.cell[j][k]);
        os << std::right << std::setw(10) << fmt_cell(b.per_variable[j]) << "\n";
    }
    os << std::left << std::setw(12) << "all";
    for (std::size_t k = 0; k < kk; ++k) os << std::right << std::setw(10) << fmt_cell(b.per_cluster[k]);
    os << std::right << std::setw(10) << fmt_cell(b.global) << "\n";
}

}  // namespace

json qpi_to_json(const QpiReport& report, const std::vector<std::string>& variable_names) {
    return json{{"mean", block_json(report.mean, variable_names)},
                {"dispersion", block_json(report.dispersion, variable_names)},
                {"combined", block_json(report.combined, variable_names)},
                {"global_qpi", report.global_qpi}};
}

std::string qpi_to_text(const QpiReport& report, const std::vector<std::string>& variable_names) {
    std::ostringstream os;
    block_text(os, "QPI (mean component)", report.mean, variable_names);
    os << "\n";
    block_text(os, "QPI (dispersion component)", report.dispersion, variable_names);
    os << "\n";
    block_text(os, "QPI (both components)", report.combined, variable_names);
    os << "\nglobal QPI = " << std::fixed << std::setprecision(6) << report.global_qpi << "\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& text) {
    open_output(path) << text;
}

void write_json(const std::string& path, const json& j) {
    open_output(path) << j.dump(2) << "\n";
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
    auto out = open_output(path);
    out << "iteration,criterion\n" << std::setprecision(17);
    for (std::size_t i = 0; i < trace.size(); ++i) out << i + 1 << "," << trace[i] << "\n";
}

void write_ch_csv(const std::string& path,
                  const std::vector<std::pair<std::size_t, double>>& rows) {
    auto out = open_output(path);
    out << "k,ch\n" << std::setprecision(17);
    for (const auto& [k, ch] : rows) out << k << "," << ch << "\n";
}

void write_labels_csv(const std::string& path, const std::vector<std::string>& ids,
                      const Partition& labels) {
    auto out = open_output(path);
    out << "id,cluster\n";
    for (std::size_t i = 0; i < ids.size(); ++i)
        out << ids[i] << "," << labels.assignment[i] << "\n";
}

void write_summary_csv(const std::string& path, const MonteCarloSummary& summary) {
    auto out = open_output(path);
    out << "scheme,cr_mean,cr_sd,accuracy_mean,accuracy_sd\n" << std::setprecision(17);
    for (const auto& s : summary.per_scheme)
        out << scheme_name(s.scheme) << "," << s.cr_mean << "," << s.cr_sd << ","
            << s.accuracy_mean << "," << s.accuracy_sd << "\n";
}

// ---------------------------------------------------------------------------
// TOML subset: [section] headers, `key = value` pairs, # comments. Values are
// numbers, double-quoted strings, or flat numeric arrays.

namespace {

struct TomlValue {
    std::variant<double, std::string, std::vector<double>> v;

    double num(const std::string& where) const {
        if (const double* d = std::get_if<double>(&v)) return *d;
        throw ParseError(where + ": expected a number");
    }
    const std::vector<double>& arr(const std::string& where) const {
        if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
        throw ParseError(where + ": expected an array");
    }
};

using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

std::string strip(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& tok, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": bad number `" + tok + "`");
    }
}

TomlValue parse_value(const std::string& raw, std::size_t lineno) {
    const std::string s = strip(raw);
    if (s.empty()) throw ParseError("line " + std::to_string(lineno) + ": missing value");
    if (s.front() == '"') {
        if (s.size() < 2 || s.back() != '"')
            throw ParseError("line " + std::to_string(lineno) + ": unterminated string");
        return {s.substr(1, s.size() - 2)};
    }
    if (s.front() == '[') {
        if (s.back() != ']')
            throw ParseError("line " + std::to_string(lineno) + ": unterminated array");
        std::vector<double> out;
        std::stringstream ss(s.substr(1, s.size() - 2));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            tok = strip(tok);
            if (!tok.empty()) out.push_back(parse_number(tok, lineno));
        }
        return {std::move(out)};
    }
    return {parse_number(s, lineno)};
}

TomlTable parse_toml(std::istream& in) {
    TomlTable table;
    std::string section;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos && line.find('"') == std::string::npos)
            line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
            section = strip(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ParseError("line " + std::to_string(lineno) + ": empty section name");
            table[section];
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected `key = value`");
        const std::string key = strip(line.substr(0, eq));
        if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
        table[section][key] = parse_value(line.substr(eq + 1), lineno);
    }
    return table;
}

ParameterPair pair_from(const TomlValue& v, const std::string& where) {
    const auto& a = v.arr(where);
    if (a.size() != 2) throw ParseError(where + ": expected [value, sd]");
    return {a[0], a[1]};
}

}  // namespace

ExperimentConfig config_from_toml(std::istream& in) {
    const TomlTable table = parse_toml(in);

    ExperimentConfig c;
    const auto exp = table.find("experiment");
    if (exp == table.end()) throw ParseError("config is missing the [experiment] section");
    const auto get_count = [&](const std::string& key, std::size_t fallback) -> std::size_t {
        const auto it = exp->second.find(key);
        if (it == exp->second.end()) return fallback;
        const double v = it->second.num("[experiment] " + key);
        if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
            throw ParseError("[experiment] " + key + " must be a non-negative integer");
        return static_cast<std::size_t>(v);
    };
    c.n_per_cluster = get_count("n_per_cluster", c.n_per_cluster);
    c.samples_per_object = get_count("samples_per_object", c.samples_per_object);
    c.bins_per_histogram = get_count("bins_per_histogram", c.bins_per_histogram);
    c.replicates = get_count("replicates", c.replicates);
    c.restarts = get_count("restarts", c.restarts);
    c.max_iter = get_count("max_iter", c.max_iter);
    c.seed = get_count("seed", 0);

    // baseline sections: [clusterK.varJ], 1-based indices
    std::size_t kk = 0, p = 0;
    for (const auto& [name, kv] : table) {
        std::size_t ci = 0, vi = 0;
        if (std::sscanf(name.c_str(), "cluster%zu.var%zu", &ci, &vi) != 2) continue;
        (void)kv;
        kk = std::max(kk, ci);
        p = std::max(p, vi);
    }
    if (kk == 0 || p == 0) throw ParseError("config has no [clusterK.varJ] baseline sections");

    c.baselines.assign(kk, std::vector<VariableBaseline>(p));
    for (std::size_t ci = 1; ci <= kk; ++ci) {
        for (std::size_t vi = 1; vi <= p; ++vi) {
            const std::string name =
                "cluster" + std::to_string(ci) + ".var" + std::to_string(vi);
            const auto it = table.find(name);
            if (it == table.end()) throw ParseError("config is missing section [" + name + "]");
            VariableBaseline& b = c.baselines[ci - 1][vi - 1];
            const auto field = [&](const std::string& key) -> ParameterPair {
                const auto f = it->second.find(key);
                if (f == it->second.end())
                    throw ParseError("[" + name + "] is missing " + key);
                return pair_from(f->second, "[" + name + "] " + key);
            };
            b.mean = field("mean");
            b.std = field("std");
            b.skewness = field("skewness");
            b.kurtosis = field("kurtosis");
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    auto in = open_input(path);
    return config_from_toml(in);
}

std::string config_to_toml(const ExperimentConfig& config) {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "[experiment]\n";
    os << "n_per_cluster = " << config.n_per_cluster << "\n";
    os << "samples_per_object = " << config.samples_per_object << "\n";
    os << "bins_per_histogram = " << config.bins_per_histogram << "\n";
    os << "replicates = " << config.replicates << "\n";
    os << "restarts = " << config.restarts << "\n";
    os << "max_iter = " << config.max_iter << "\n";
    os << "seed = " << config.seed << "\n";
    for (std::size_t k = 0; k < config.clusters(); ++k) {
        for (std::size_t j = 0; j < config.variables(); ++j) {
            const auto& b = config.baselines[k][j];
            os << "\n[cluster" << k + 1 << ".var" << j + 1 << "]\n";
            const auto emit = [&](const char* key, const ParameterPair& v) {
                os << key << " = [" << v.value << ", " << v.sd << "]\n";
            };
            emit("mean", b.mean);
            emit("std", b.std);
            emit("skewness", b.skewness);
            emit("kurtosis", b.kurtosis);
        }
    }
    return os.str();
}

}  // namespace histoclust::io
