#include "sfpde/series.hpp"

#include "json.hpp"

#include <cmath>
#include <sstream>

namespace sfpde {

DoubleSeries::DoubleSeries(int M, int N)
    : M_(M), N_(N), c_(static_cast<std::size_t>(std::max(M, 0) * (std::max(N, 0) + 1)), cplx{}) {
  if (M < 1 || N < 0) throw SeriesError("series orders need M >= 1 and N >= 0");
}

cplx& DoubleSeries::at(int i, int j) {
  if (i < 1 || i > M_ || j < 0 || j > N_) throw SeriesError("series index out of range");
  return c_[static_cast<std::size_t>((i - 1) * (N_ + 1) + j)];
}

cplx DoubleSeries::at(int i, int j) const {
  if (i == 0 && j >= 0 && j <= N_) return 0.0;
  if (i < 1 || i > M_ || j < 0 || j > N_) throw SeriesError("series index out of range");
  return c_[static_cast<std::size_t>((i - 1) * (N_ + 1) + j)];
}

cplx DoubleSeries::eval(double t, cplx x) const {
  cplx acc{};
  for (int i = M_; i >= 1; --i) {
    cplx row{};
    for (int j = N_; j >= 0; --j) row = row * x + at(i, j);
    acc = (acc + row) * t;
  }
  return acc;
}

cplx DoubleSeries::eval_dx(double t, cplx x) const {
  cplx acc{};
  for (int i = M_; i >= 1; --i) {
    cplx row{};
    for (int j = N_; j >= 1; --j) row = row * x + static_cast<double>(j) * at(i, j);
    acc = (acc + row) * t;
  }
  return acc;
}

cplx DoubleSeries::eval_tdt(double t, cplx x) const {
  cplx acc{};
  for (int i = M_; i >= 1; --i) {
    cplx row{};
    for (int j = N_; j >= 0; --j) row = row * x + at(i, j);
    acc = (acc + static_cast<double>(i) * row) * t;
  }
  return acc;
}

namespace {

struct Composer {
  const PdeSpec& pde;
  int deg_x;

  // Coefficient (i, j) of t U_t - F(t, x, U, V) with the series truncated at t^i.
  cplx residual_coeff(const BiSeries& full, int i, int j) const {
    BiSeries U(i, deg_x);
    for (int a = 0; a <= i; ++a)
      for (int b = 0; b <= deg_x; ++b) U.at(a, b) = full.at(a, b);
    const BiSeries T = BiSeries::t_monomial(i, deg_x);
    const BiSeries X = BiSeries::x_monomial(i, deg_x);
    const BiSeries V = pde.euler_form ? U.euler_dx() : U.dx();
    const BiSeries F = eval_series(pde.rhs, T, X, U, V);
    return static_cast<double>(i) * U.at(i, j) - F.at(i, j);
  }
};

}  // namespace

DoubleSeries build_solution(const PdeSpec& pde, const CaseClass& cc, int M, int N,
                            double res_tol) {
  if (cc.case_id == 3) throw SeriesError("series construction is limited to Cases 1 and 2");
  if (M < 1 || N < 0) throw SeriesError("series orders need M >= 1 and N >= 0");

  // u_x lowers the x-degree, so row i needs x-degree up to N + (M - i).
  const int deg_x = N + M;
  const Composer comp{pde, deg_x};

  {
    // F(0, x, 0, 0) must vanish for a solution with u(0, x) = 0.
    const BiSeries Z(0, deg_x);
    const BiSeries F = eval_series(pde.rhs, BiSeries(0, deg_x), BiSeries::x_monomial(0, deg_x),
                                   Z, Z);
    for (int j = 0; j <= deg_x; ++j)
      if (std::abs(F.at(0, j)) > 1e-12) {
        std::ostringstream os;
        os << "F(0,x,0,0) has nonzero x^" << j << " coefficient " << std::abs(F.at(0, j))
           << "; no solution with u(0,x)=0";
        throw SeriesError(os.str());
      }
    const BiSeries G = eval_series(diff(pde.rhs, Var::v), BiSeries(0, 0),
                                   BiSeries::constant(0, 0, 0.0), BiSeries(0, 0), BiSeries(0, 0));
    if (!pde.euler_form && std::abs(G.at(0, 0)) > 1e-12)
      throw SeriesError("b(0) != 0: the coefficient recursion is not triangular");
  }

  BiSeries U(M, deg_x);
  std::vector<SmallDivisor> resonances;
  std::vector<SmallDivisor> near;
  for (int d = 1; d <= deg_x; ++d) {
    for (int i = 1; i <= std::min(M, d); ++i) {
      const int j = d - i;
      if (j > N + M - i) continue;
      U.at(i, j) = 0.0;
      const cplx e0 = comp.residual_coeff(U, i, j);
      U.at(i, j) = 1.0;
      const cplx e1 = comp.residual_coeff(U, i, j);
      const cplx den = e1 - e0;
      const double mod = std::abs(den);
      if (mod < res_tol) {
        resonances.push_back({i, j, mod});
        U.at(i, j) = 0.0;
        continue;
      }
      if (mod <= 1e-3) near.push_back({i, j, mod});
      U.at(i, j) = -e0 / den;
    }
  }

  if (!resonances.empty()) {
    std::ostringstream os;
    os << "resonance at";
    for (const auto& r : resonances) os << " (" << r.i << "," << r.j << ")";
    throw ResonanceError(os.str(), resonances);
  }

  DoubleSeries s(M, N);
  for (int i = 1; i <= M; ++i)
    for (int j = 0; j <= N; ++j) s.at(i, j) = U.at(i, j);
  s.near_resonances = std::move(near);
  return s;
}

double residual(const PdeSpec& pde, const DoubleSeries& s, const Grid& grid) {
  double worst = 0.0;
  for (double t : grid.times)
    for (cplx x : grid.points) {
      const cplx u = s.eval(t, x);
      const cplx ux = s.eval_dx(t, x);
      const cplx v = pde.euler_form ? x * ux : ux;
      const cplx r = s.eval_tdt(t, x) - eval(pde.rhs, t, x, u, v);
      worst = std::max(worst, std::abs(r));
    }
  return worst;
}

std::string series_to_json(const DoubleSeries& s) {
  nlohmann::ordered_json j;
  j["schema"] = "series-v1";
  j["M"] = s.M();
  j["N"] = s.N();
  auto arr = nlohmann::ordered_json::array();
  for (const cplx& c : s.coeffs()) arr.push_back({c.real(), c.imag()});
  j["coeffs"] = std::move(arr);
  return j.dump();
}

DoubleSeries series_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SeriesError(std::string("series JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("M") || !j.contains("N") || !j.contains("coeffs"))
    throw SeriesError("series JSON needs M, N and coeffs");
  if (j.contains("schema") && j["schema"] != "series-v1")
    throw SeriesError("series JSON has an unknown schema tag");
  DoubleSeries s(j["M"].get<int>(), j["N"].get<int>());
  const auto& arr = j["coeffs"];
  if (!arr.is_array() || arr.size() != s.coeffs().size())
    throw SeriesError("series JSON coefficient count does not match M and N");
  std::size_t k = 0;
  for (int i = 1; i <= s.M(); ++i)
    for (int jj = 0; jj <= s.N(); ++jj, ++k) {
      const auto& pair = arr[k];
      if (!pair.is_array() || pair.size() != 2) throw SeriesError("series coefficient must be [re, im]");
      s.at(i, jj) = cplx(pair[0].get<double>(), pair[1].get<double>());
    }
  return s;
}

}  // namespace sfpde
