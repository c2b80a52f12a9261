#pragma once

#include "dualk/types.hpp"

namespace dualk {

enum class FeatureLabel { Generative, Discriminative };

const char* label_name(FeatureLabel label);

// F(x) = sum_j alphas_j k_d(y_j, x), with k_d the kernel reached at `degree`.
struct Feature {
  Vector alphas;
  int degree = 1;
  FeatureLabel label = FeatureLabel::Discriminative;
  double singular_value = 0.0;
  double quantum = 0.0;
  // Row of the feature within its block (V or V_perp of its degree).
  Index index = 0;
};

}  // namespace dualk
