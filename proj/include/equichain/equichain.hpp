#pragma once

#include "equichain/asymptotics.hpp"
#include "equichain/chain_spec.hpp"
#include "equichain/coefficient.hpp"
#include "equichain/equivariance.hpp"
#include "equichain/errors.hpp"
#include "equichain/groebner.hpp"
#include "equichain/hilbert.hpp"
#include "equichain/linalg.hpp"
#include "equichain/monomial_ideal.hpp"
#include "equichain/polynomial.hpp"
#include "equichain/resolutions.hpp"
#include "equichain/ring.hpp"
