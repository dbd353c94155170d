#include "balens/synthetic.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "balens/errors.hpp"
#include "balens/rng.hpp"

namespace balens {

std::size_t informative_numeric_count(const SynthSpec& spec) {
  return (spec.p_numeric + 1) / 2;
}

Dataset generate_synthetic(const SynthSpec& spec) {
  if (spec.n < 4) throw SpecInvalid("generate_synthetic: n must be at least 4");
  if (spec.positive_rate <= 0.0 || spec.positive_rate >= 1.0) {
    throw SpecInvalid("generate_synthetic: positive_rate must lie in (0,1)");
  }
  if (spec.missing_rate < 0.0 || spec.missing_rate >= 1.0) {
    throw SpecInvalid("generate_synthetic: missing_rate must lie in [0,1)");
  }
  if (spec.class_separation < 0.0) {
    throw SpecInvalid("generate_synthetic: class_separation must be nonnegative");
  }
  if (spec.p_numeric + spec.p_categorical == 0) {
    throw SpecInvalid("generate_synthetic: at least one feature required");
  }
  const std::size_t positives =
      static_cast<std::size_t>(std::lround(static_cast<double>(spec.n) * spec.positive_rate));
  if (positives == 0 || positives >= spec.n) {
    throw SpecInvalid("generate_synthetic: rounded positive count leaves a class empty");
  }

  Rng rng(spec.seed);
  std::vector<int> labels(spec.n, 0);
  for (std::size_t i = 0; i < positives; ++i) labels[i] = 1;
  rng.shuffle(std::span<int>(labels));

  const std::size_t informative = informative_numeric_count(spec);
  std::vector<FeatureSpec> schema;
  for (std::size_t k = 0; k < spec.p_numeric; ++k) {
    const std::string name =
        k < informative ? "num_i" + std::to_string(k) : "num_n" + std::to_string(k - informative);
    schema.push_back({name, FeatureKind::Numeric, schema.size()});
  }
  for (std::size_t k = 0; k < spec.p_categorical; ++k) {
    schema.push_back({"cat" + std::to_string(k), FeatureKind::Categorical, schema.size()});
  }

  // Values first, then one missingness pass, so the same seed produces the
  // same underlying values at every missing_rate.
  std::vector<std::vector<double>> numeric(spec.p_numeric, std::vector<double>(spec.n));
  for (std::size_t k = 0; k < spec.p_numeric; ++k) {
    const double shift = k < informative ? spec.class_separation : 0.0;
    for (std::size_t r = 0; r < spec.n; ++r) {
      numeric[k][r] = rng.normal() + (labels[r] ? shift : 0.0);
    }
  }

  static constexpr const char* kTokens[3] = {"a", "b", "c"};
  double pos_cdf[3];
  {
    double acc = 0.0;
    double weight[3];
    for (int j = 0; j < 3; ++j) {
      weight[j] = std::exp(-spec.class_separation * j / 2.0);
      acc += weight[j];
    }
    double run = 0.0;
    for (int j = 0; j < 3; ++j) {
      run += weight[j] / acc;
      pos_cdf[j] = run;
    }
  }
  std::vector<std::vector<int>> categorical(spec.p_categorical, std::vector<int>(spec.n));
  for (std::size_t k = 0; k < spec.p_categorical; ++k) {
    for (std::size_t r = 0; r < spec.n; ++r) {
      const double u = rng.unit();
      int code = 2;
      if (labels[r]) {
        for (int j = 0; j < 3; ++j) {
          if (u < pos_cdf[j]) {
            code = j;
            break;
          }
        }
      } else {
        code = std::min(2, static_cast<int>(u * 3.0));
      }
      categorical[k][r] = code;
    }
  }

  const std::size_t p = schema.size();
  std::vector<std::vector<std::uint8_t>> missing(p, std::vector<std::uint8_t>(spec.n, 0));
  if (spec.missing_rate > 0.0) {
    for (std::size_t c = 0; c < p; ++c) {
      for (std::size_t r = 0; r < spec.n; ++r) {
        if (rng.unit() < spec.missing_rate) missing[c][r] = 1;
      }
    }
  }

  Dataset ds(std::move(schema), std::move(labels));
  for (std::size_t k = 0; k < spec.p_numeric; ++k) {
    for (std::size_t r = 0; r < spec.n; ++r) {
      if (!missing[k][r]) ds.set_numeric(r, k, numeric[k][r]);
    }
  }
  for (std::size_t k = 0; k < spec.p_categorical; ++k) {
    const std::size_t c = spec.p_numeric + k;
    for (std::size_t r = 0; r < spec.n; ++r) {
      if (!missing[c][r]) ds.set_categorical(r, c, kTokens[categorical[k][r]]);
    }
  }
  return ds;
}

}  // namespace balens
