#ifndef HISTOCLUST_IO_HPP
#define HISTOCLUST_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "histoclust/clustering.hpp"
#include "histoclust/evaluation.hpp"
#include "histoclust/histogram.hpp"
#include "histoclust/synthgen.hpp"

namespace histoclust::io {

using nlohmann::json;

// Histogram text form: {"bins": [[lower, upper, weight], ...]}.
json histogram_to_json(const Histogram& h);
Histogram histogram_from_json(const json& j);

// Matrix file: {"variables": [...], "objects": [{"id":..., "cells":[...]}]}.
json matrix_to_json(const HistogramMatrix& m);
HistogramMatrix matrix_from_json(const json& j);

/// Raw-samples CSV: one row per draw, `object_id,variable,value`, converted
/// to equi-depth histograms with num_bins bins. Objects and variables keep
/// first-appearance order.
HistogramMatrix matrix_from_samples_csv(std::istream& in, std::size_t num_bins);

/// Loads either format by extension (.json vs anything else = samples CSV).
HistogramMatrix load_matrix(const std::string& path, std::size_t num_bins);

json result_to_json(const ClusteringResult& result, const HistogramMatrix& matrix);

/// Prototypes as quantile knots (exact representation; the mean of quantile
/// functions need not align to any bin grid), per cluster and for E.
json prototypes_to_json(const ClusteringResult& result,
                        const std::vector<Histogram>& general_prototype,
                        const std::vector<std::string>& variable_names);

json qpi_to_json(const QpiReport& report, const std::vector<std::string>& variable_names);

/// Aligned-column text rendering of the three report blocks
/// (mean component, dispersion component, both combined).
std::string qpi_to_text(const QpiReport& report, const std::vector<std::string>& variable_names);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const json& j);
void write_trace_csv(const std::string& path, const std::vector<double>& trace);
void write_ch_csv(const std::string& path,
                  const std::vector<std::pair<std::size_t, double>>& rows);
void write_labels_csv(const std::string& path, const std::vector<std::string>& ids,
                      const Partition& labels);
void write_summary_csv(const std::string& path, const MonteCarloSummary& summary);

/// Experiment config from a TOML file (a small subset: [section] headers,
/// `key = value` with numbers, strings and flat numeric arrays, # comments).
ExperimentConfig config_from_toml(std::istream& in);
ExperimentConfig load_config(const std::string& path);
std::string config_to_toml(const ExperimentConfig& config);

}  // namespace histoclust::io

#endif
