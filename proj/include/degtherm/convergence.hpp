#pragma once

#include "degtherm/common.hpp"

#include <string>
#include <vector>

namespace degtherm {

struct OrderRow {
  double step = 0.0;   // h or dt
  double error = 0.0;  // max-norm error
  double ratio = 0.0;  // error of the previous row over this one; 0 on the first row
};

struct OrderStudy {
  std::string name;
  std::vector<OrderRow> rows;
  double last_ratio() const { return rows.empty() ? 0.0 : rows.back().ratio; }
};

/// Manufactured variable-coefficient elliptic problem on n x n cells per entry.
OrderStudy elliptic_space_order(const std::vector<Index>& cells = {16, 32, 64});

/// Manufactured heat problem with dt = dt_scale h^2, compared at time T.
OrderStudy parabolic_space_order(const std::vector<Index>& cells = {8, 16, 32}, double T = 0.05,
                                 double dt_scale = 0.5);

/// Backward Euler at dt = T / (steps0 2^k) on a fixed grid, errors against the
/// Richardson value 2 u_{dt_min} - u_{2 dt_min} so that the spatial error cancels.
OrderStudy parabolic_time_order(Index cells = 32, double T = 0.1, Index steps0 = 10,
                                int levels = 4);

std::string format_study(const OrderStudy& study);

}  // namespace degtherm
