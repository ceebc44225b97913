#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "padelab/lab.hpp"

namespace padelab {

// CSV contract: header row, '.' decimals, '\n' line endings, shortest
// round-trip numbers, inf/-inf/nan for non-finite values, 0/1 for flags.

// n,e_n,e_n_full,root_rate,target,pole_error,k_n,built,ill_conditioned,degenerate
void write_rates_csv(std::ostream& out, const RateSeries& s);
// n,h_n,target,in_lambda
void write_exactness_csv(std::ostream& out, const ExactnessReport& r);
// n,discrepancy,skipped
void write_distribution_csv(std::ostream& out, std::span<const DistributionRow> rows);
// z0_re,z0_im,n,mass
void write_clusters_csv(std::ostream& out, const ClusterReport& r);
// n,kind,re,im,multiplicity with kind zero or pole
void write_roots_csv(std::ostream& out, const BuildSweep& sweep);

// One entry per order: coefficients as [re, im] pairs, roots and diagnostics.
nlohmann::json approximant_json(const PadeApproximant& a);
nlohmann::json approximants_json(const BuildSweep& sweep);

// Stage summaries.
nlohmann::json sweep_summary(const BuildSweep& sweep);
nlohmann::json rates_summary(const RateSeries& s);
nlohmann::json exactness_summary(const ExactnessReport& r);
nlohmann::json distribution_summary(std::span<const DistributionRow> rows, std::span<const Complex> test_points);
nlohmann::json clusters_summary(const ClusterReport& r);

// Quote a CSV field when it holds a comma, quote or newline.
std::string csv_field(const std::string& s);

}  // namespace padelab
