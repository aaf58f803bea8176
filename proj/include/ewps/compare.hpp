// Copyright (c) 2026 the ewps authors
// Distributed under the MIT License (see LICENSE).
//
// The model zoo for the fit-and-compare workflow: the four compound families
// plus the exponentiated Weibull and plain Weibull comparison models, each
// fitted by direct MLE and scored with the full goodness-of-fit panel.

#ifndef EWPS_COMPARE_HPP
#define EWPS_COMPARE_HPP

#include <functional>
#include <future>
#include <string>
#include <vector>

#include "ewps/dataset.hpp"
#include "ewps/ewps.hpp"
#include "ewps/gof.hpp"
#include "ewps/inference.hpp"

namespace ewps {

enum class ModelId { ewg, ewp, ewl, ewb, ew, weibull };

inline const char* model_name(ModelId id) {
  switch (id) {
    case ModelId::ewg: return "EWG";
    case ModelId::ewp: return "EWP";
    case ModelId::ewl: return "EWL";
    case ModelId::ewb: return "EWB";
    case ModelId::ew: return "EW";
    default: return "Weibull";
  }
}

struct ModelFit {
  ModelId id;
  std::string name;
  FitResult fit;
  std::function<double(double)> cdf;
  GofReport gof;
  bool ok = false;
  std::string error;
};

inline std::function<double(double)> fitted_cdf(ModelId id, const std::vector<double>& par,
                                                int binomial_m) {
  switch (id) {
    case ModelId::ew: {
      const EwParams e(par[0], par[1], par[2]);
      return [e](double y) { return ew_cdf(e, y); };
    }
    case ModelId::weibull: {
      const EwParams e(1.0, par[0], par[1]);
      return [e](double y) { return ew_cdf(e, y); };
    }
    default: {
      PowerSeries fam = id == ModelId::ewg   ? PowerSeries::geometric()
                        : id == ModelId::ewp ? PowerSeries::poisson()
                        : id == ModelId::ewl ? PowerSeries::logarithmic()
                                             : PowerSeries::binomial(binomial_m);
      const EwpsParams p(EwParams(par[0], par[1], par[2]), fam, par[3]);
      return [p](double y) { return ewps_cdf(p, y); };
    }
  }
}

inline ModelFit fit_model(const Dataset& d, ModelId id, int binomial_m = 10) {
  ModelFit out;
  out.id = id;
  out.name = model_name(id);
  try {
    switch (id) {
      case ModelId::ew: out.fit = ew_fit(d); break;
      case ModelId::weibull: out.fit = weibull_fit(d); break;
      case ModelId::ewg: out.fit = mle_fit(d, PowerSeries::geometric()); break;
      case ModelId::ewp: out.fit = mle_fit(d, PowerSeries::poisson()); break;
      case ModelId::ewl: out.fit = mle_fit(d, PowerSeries::logarithmic()); break;
      case ModelId::ewb: out.fit = mle_fit(d, PowerSeries::binomial(binomial_m)); break;
    }
    out.cdf = fitted_cdf(id, out.fit.params, binomial_m);
    out.gof = evaluate_gof(d, out.cdf, out.fit.neg2loglik,
                           static_cast<int>(out.fit.params.size()));
    out.ok = true;
  } catch (const std::exception& ex) {
    out.error = ex.what();
  }
  return out;
}

/// Fits the six comparison models concurrently; results come back in the
/// fixed model order regardless of completion order.
inline std::vector<ModelFit> compare_models(const Dataset& d, int binomial_m = 10) {
  const ModelId ids[] = {ModelId::ewg, ModelId::ewp, ModelId::ewl,
                         ModelId::ewb, ModelId::ew,  ModelId::weibull};
  std::vector<std::future<ModelFit>> futs;
  futs.reserve(6);
  for (ModelId id : ids)
    futs.push_back(std::async(std::launch::async, [&d, id, binomial_m] {
      return fit_model(d, id, binomial_m);
    }));
  std::vector<ModelFit> out;
  out.reserve(6);
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

}  // namespace ewps

#endif  // EWPS_COMPARE_HPP
