#include "tvp/tensor.hpp"

#include <stdexcept>

namespace tvp {

ElasticityTensor::ElasticityTensor(double lame_lambda, double lame_mu)
    : lambda_(lame_lambda), mu_(lame_mu) {
  if (!(mu_ > 0.0) || !(3.0 * lambda_ + 2.0 * mu_ > 0.0))
    throw std::invalid_argument(
        "elasticity requires mu > 0 and 3*lambda + 2*mu > 0");
}

}  // namespace tvp
