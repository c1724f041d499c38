#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "qpat/grid.hpp"
#include "qpat/qgrid_io.hpp"

namespace qpat {

/// 100 ||rec - ex||_2 / ||ex||_2 over all nodes.
inline double rmse_pct(const ScalarField& rec, const ScalarField& ex) {
    require_conformable(rec, ex, "rmse_pct");
    const double denom = l2_norm_vector(ex);
    if (denom == 0.0) throw ContractError("rmse_pct: exact field is identically zero");
    return 100.0 * l2_norm_vector(rec - ex) / denom;
}

/// 10 log10(max(ex) / ||rec - ex||_2^2). Not the textbook PSNR; +inf on an exact match.
inline double psnr(const ScalarField& rec, const ScalarField& ex) {
    require_conformable(rec, ex, "psnr");
    const double peak = *std::max_element(ex.values().begin(), ex.values().end());
    if (!(peak > 0.0)) throw ContractError("psnr: max of exact field must be positive");
    const double err = std::pow(l2_norm_vector(rec - ex), 2);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak / err);
}

/// Conventional 10 log10(max(ex)^2 / MSE).
inline double psnr_std(const ScalarField& rec, const ScalarField& ex) {
    require_conformable(rec, ex, "psnr_std");
    const double peak = *std::max_element(ex.values().begin(), ex.values().end());
    if (!(peak > 0.0)) throw ContractError("psnr_std: max of exact field must be positive");
    const double mse = std::pow(l2_norm_vector(rec - ex), 2) / static_cast<double>(ex.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(peak * peak / mse);
}

struct MeritReport {
    int case_id = 0;
    double noise = 0.0;
    double rmse_pct_D = 0.0;
    double rmse_pct_sigma_a = 0.0;
    double psnr_D = 0.0;
    double psnr_sigma_a = 0.0;
    double psnr_std_D = 0.0;
    double psnr_std_sigma_a = 0.0;
};

inline MeritReport report(int case_id, double noise, const ScalarField& D_rec, const ScalarField& sigma_a_rec,
                          const ScalarField& D_ex, const ScalarField& sigma_a_ex) {
    MeritReport r;
    r.case_id = case_id;
    r.noise = noise;
    r.rmse_pct_D = rmse_pct(D_rec, D_ex);
    r.rmse_pct_sigma_a = rmse_pct(sigma_a_rec, sigma_a_ex);
    r.psnr_D = psnr(D_rec, D_ex);
    r.psnr_sigma_a = psnr(sigma_a_rec, sigma_a_ex);
    r.psnr_std_D = psnr_std(D_rec, D_ex);
    r.psnr_std_sigma_a = psnr_std(sigma_a_rec, sigma_a_ex);
    return r;
}

inline std::string metrics_csv_header() {
    return "case,noise,rmse_pct_D,rmse_pct_sigma_a,psnr_D,psnr_sigma_a,psnr_std_D,psnr_std_sigma_a\n";
}

inline std::string metrics_csv_row(const MeritReport& r) {
    return std::to_string(r.case_id) + "," + format_double(r.noise) + "," + format_double(r.rmse_pct_D) + "," +
           format_double(r.rmse_pct_sigma_a) + "," + format_double(r.psnr_D) + "," + format_double(r.psnr_sigma_a) +
           "," + format_double(r.psnr_std_D) + "," + format_double(r.psnr_std_sigma_a) + "\n";
}

/// Human-readable table in the column order RMSE% D, RMSE% sigma_a, PSNR D, PSNR sigma_a.
inline std::string metrics_table(const std::vector<MeritReport>& rows) {
    std::string out = "case  noise%   RMSE%(D)  RMSE%(sa)   PSNR(D)  PSNR(sa)\n";
    char buf[128];
    for (const MeritReport& r : rows) {
        std::snprintf(buf, sizeof buf, "%4d  %6.1f  %9.2f  %9.2f  %8.2f  %8.2f\n", r.case_id, 100.0 * r.noise,
                      r.rmse_pct_D, r.rmse_pct_sigma_a, r.psnr_D, r.psnr_sigma_a);
        out += buf;
    }
    return out;
}

}  // namespace qpat
