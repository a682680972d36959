#include "psq/constants.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

namespace psq {

namespace {

struct Job {
  std::string id;  // catalog id to integrate directly (whole or bad variant)
};

}  // namespace

ConstantsReport compute_constants(const Decomposition& d,
                                  const BuchstabTable& omega, double tol,
                                  unsigned jobs) {
  ConstantsReport rep;
  rep.sigma = d.params.sigma;

  // every split id evaluates as whole - bad; collect the direct integrands
  auto base_of = [](const std::string& id) {
    if (id.size() > 1 && (id.back() == 'g' || id.back() == 'b'))
      return id.substr(0, id.size() - 1);
    return id;
  };
  std::vector<std::string> direct;
  auto want = [&](const std::string& id) {
    if (std::find(direct.begin(), direct.end(), id) == direct.end())
      direct.push_back(id);
  };
  const std::vector<std::pair<const char*, const std::vector<SignedTerm>*>> lists =
      {{"g1", &d.g1}, {"b1", &d.b1}, {"b2", &d.b2}, {"g2", &d.g2}, {"b3", &d.b3}};
  for (auto& [name, list] : lists)
    for (const auto& st : *list) {
      const std::string& id = d.catalog[st.term_index].id;
      if (id.back() == 'g') {
        want(base_of(id));
        want(base_of(id) + "b");
      } else {
        want(id);
      }
    }

  // per-term tolerance: the largest list has 12 entries and good terms use
  // two integrals, so tol/32 per direct integral keeps each constant inside
  // its budget
  const double tol_term = tol / 32.0;
  std::map<std::string, QuadratureResult> results;
  {
    std::vector<QuadratureResult> slots(direct.size());
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    unsigned nthreads = std::max(1u, jobs);
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= direct.size()) return;
        const SieveTerm& t = d.term(direct[i]);
        IntegralSpec spec = term_to_integral(t, d.params);
        slots[i] = integrate(spec, omega, tol_term);
      }
    };
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (size_t i = 0; i < direct.size(); ++i) results[direct[i]] = slots[i];
  }

  auto value_of = [&](const std::string& id) {
    QuadratureResult r;
    if (id.back() == 'g') {
      const auto& whole = results.at(base_of(id));
      const auto& bad = results.at(base_of(id) + "b");
      r.value = whole.value - bad.value;
      r.err_estimate = whole.err_estimate + bad.err_estimate;
      r.empty_region = whole.empty_region && bad.empty_region;
      r.omega_clipped = whole.omega_clipped || bad.omega_clipped;
      r.budget_exhausted = whole.budget_exhausted || bad.budget_exhausted;
      // the good part of psi26 is empty by construction; snap the
      // whole-minus-bad cancellation to zero when it is below noise
      if (std::abs(r.value) <= r.err_estimate && whole.value > 0 &&
          std::abs(r.value) < 1e-6 * whole.value)
        r.empty_region = true;
    } else {
      r = results.at(id);
    }
    return r;
  };

  auto accumulate = [&](const char* name, const std::vector<SignedTerm>& list,
                        double& C, double& err) {
    for (const auto& st : list) {
      const std::string& id = d.catalog[st.term_index].id;
      QuadratureResult r = value_of(id);
      C += st.sign * r.value;
      err += r.err_estimate;
      TermContribution tc;
      tc.id = id;
      tc.list = name;
      tc.sign = st.sign;
      tc.value = r.value;
      tc.err = r.err_estimate;
      tc.empty_region = r.empty_region;
      tc.omega_clipped = r.omega_clipped;
      tc.budget_exhausted = r.budget_exhausted;
      rep.per_term.push_back(tc);
      rep.any_budget_exhausted |= r.budget_exhausted;
    }
  };

  accumulate("g1", d.g1, rep.C1, rep.err1);
  accumulate("b1", d.b1, rep.C3, rep.err3);
  accumulate("b2", d.b2, rep.Cb2, rep.err_b2);
  accumulate("g2", d.g2, rep.C2, rep.err2);
  accumulate("b3", d.b3, rep.Cb3, rep.err_b3);
  rep.margin = rep.C1 - rep.C2 * rep.C3;
  return rep;
}

}  // namespace psq
