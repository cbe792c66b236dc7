#include "ranksieve/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ranksieve/prox.hpp"

namespace ranksieve {

std::string_view to_string(Loss loss) {
  switch (loss) {
    case Loss::WilcoxonRank:
      return "rank";
    case Loss::EuclideanNorm:
      return "sqrt";
  }
  return "unknown";
}

Loss parse_loss(std::string_view name) {
  if (name == "rank" || name == "wilcoxon" || name == "WilcoxonRank") return Loss::WilcoxonRank;
  if (name == "sqrt" || name == "euclidean" || name == "EuclideanNorm") return Loss::EuclideanNorm;
  throw std::invalid_argument("unknown loss '" + std::string(name) + "' (expected rank|sqrt)");
}

ProblemData::ProblemData(Matrix A, Vector b, double lambda, Loss loss)
    : A_(std::move(A)), b_(std::move(b)), lambda_(lambda), loss_(loss) {
  if (A_.rows() != b_.size())
    throw std::invalid_argument("ProblemData: A has " + std::to_string(A_.rows()) +
                                " rows but b has " + std::to_string(b_.size()) + " entries");
  const Index min_n = loss_ == Loss::WilcoxonRank ? 2 : 1;
  if (A_.rows() < min_n)
    throw std::invalid_argument("ProblemData: too few samples for the selected loss");
  if (A_.cols() < 1) throw std::invalid_argument("ProblemData: A has no columns");
  if (!(lambda_ > 0) || !std::isfinite(lambda_))
    throw std::invalid_argument("ProblemData: lambda must be positive and finite");
  if (!A_.allFinite() || !b_.allFinite())
    throw std::invalid_argument("ProblemData: A and b must be finite");
}

ProblemData::ProblemData(Unchecked, Matrix A, Vector b, double lambda, Loss loss)
    : A_(std::move(A)), b_(std::move(b)), lambda_(lambda), loss_(loss) {}

ProblemData ProblemData::restrict_to(std::span<const Index> columns) const {
  Matrix sub(n(), static_cast<Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] < 0 || columns[k] >= p())
      throw std::invalid_argument("restrict_to: column index out of range");
    sub.col(static_cast<Index>(k)) = A_.col(columns[k]);
  }
  return ProblemData(Unchecked{}, std::move(sub), b_, lambda_, loss_);
}

void SolverConfig::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(msg); };
  if (!(eps > 0)) fail("eps must be positive");
  if (!(eps_tilde > 0 && eps_tilde < eps)) fail("eps_tilde must satisfy 0 < eps_tilde < eps");
  if (!(eps_ssn > 0)) fail("eps_ssn must be positive");
  if (m_add < 0 || m_cap < 0) fail("m_add and m_cap must be nonnegative");
  if (m_add > 0 && m_cap > 0 && m_cap < m_add) fail("m_cap must be at least m_add");
  if (!(sigma0 > 0) || !(sigma_factor >= 1) || !(sigma_max >= sigma0))
    fail("sigma schedule must start positive and be nondecreasing");
  if (!(rho0 > 0) || !(rho_factor >= 1) || !(rho_max >= rho0))
    fail("rho schedule must start positive and be nondecreasing");
  if (!(summable_ratio > 0 && summable_ratio < 1)) fail("summable_ratio must lie in (0,1)");
  if (!(armijo_mu > 0 && armijo_mu < 0.5)) fail("armijo_mu must lie in (0, 1/2)");
  if (!(armijo_delta > 0 && armijo_delta < 1)) fail("armijo_delta must lie in (0, 1)");
  if (!(eta_bar0 > 0 && eta_bar0 < 1) || !(eta_bar1 > 0)) fail("CG forcing terms out of range");
  if (cg_max_iter < 1 || max_ssn_iter < 1 || max_alm_iter < 1 || max_ppa_iter < 1 ||
      max_as_rounds < 1 || max_line_search < 1)
    fail("iteration caps must be positive");
}

Index SolverConfig::resolved_m_add(Index p) const {
  if (m_add > 0) return std::min(m_add, p);
  return std::clamp<Index>(static_cast<Index>(std::lround(static_cast<double>(p) / 100.0)), 1, p);
}

Index SolverConfig::resolved_m_cap(Index p) const {
  const Index add = resolved_m_add(p);
  if (m_cap > 0) return std::clamp<Index>(m_cap, add, p);
  return std::clamp<Index>(static_cast<Index>(std::lround(static_cast<double>(p) / 40.0)), add, p);
}

double objective(const ProblemData& data, const Vector& x) {
  if (x.size() != data.p())
    throw std::invalid_argument("objective: x has " + std::to_string(x.size()) +
                                " entries, expected " + std::to_string(data.p()));
  const Vector u = data.b() - data.A() * x;
  return loss_value(data.loss(), u) + data.lambda() * x.lpNorm<1>();
}

}  // namespace ranksieve
