#pragma once

#include <string>
#include <utility>
#include <vector>

#include "purity/asymptotics.hpp"
#include "purity/cq_ensemble.hpp"
#include "purity/density_matrix.hpp"
#include "purity/tradeoff.hpp"

namespace purity {

// %.17g rendering used by every writer, enough digits to round-trip a double
std::string format_double(double v);

// Text formats, whitespace-separated with '#' line comments:
//   density:  dim, then dim^2 entries "re im" row-major
//   ensemble: "|X| d_B", then per label p(x) followed by 2*d_B^2 reals
//   channel:  "|X| |Y|", then |X| rows of |Y| probabilities
DensityMatrix load_density(const std::string& path);
void save_density(const std::string& path, const DensityMatrix& rho);

CQEnsemble load_ensemble(const std::string& path);
void save_ensemble(const std::string& path, const CQEnsemble& ens);

ClassicalChannel load_channel(const std::string& path);
void save_channel(const std::string& path, const ClassicalChannel& w);

// Curve CSV: header "mu,R_bits,P_bits", one row per point.  The first column
// holds whatever parameter swept the curve (a multiplier or a closed-form
// parameter).
struct CurveRow {
    double mu = 0.0;
    double r = 0.0;
    double p = 0.0;
};

void write_points_csv(const std::string& path, const std::vector<CurveRow>& rows);
std::vector<CurveRow> load_points_csv(const std::string& path);

// Envelope CSV: header "R_bits,P_env_bits"
void write_envelope_csv(const std::string& path,
                        const std::vector<std::pair<double, double>>& vertices);
std::vector<std::pair<double, double>> load_envelope_csv(const std::string& path);

// Ledger: key=value lines in fixed key order
std::string format_ledger(const ResourceLedger& led);
void write_ledger(const std::string& path, const ResourceLedger& led);
ResourceLedger load_ledger(const std::string& path);

// All writers go through this: write to a temp sibling, then rename over the
// destination, so readers never observe a partial file.
void atomic_write(const std::string& path, const std::string& content);

} // namespace purity
