#pragma once

#include <cstddef>

#include "trapwalk/limits/cadlag_step.hpp"

namespace trapwalk {

// Skorohod J1 distance between step functions on a common horizon [0, T].
//
// A time change moves each jump of f to a new position within eps of the
// original, keeping order; a moved jump either coincides with a jump of g or
// sits alone, in which case the intermediate pair of values must also stay
// within eps. The smallest feasible eps is found by bisection over the finite
// set of candidate values |s_i - t_k| and |f_a - g_b|, so the result is exact.
double j1_distance(const CadlagStep& f, const CadlagStep& g);

// Upper approximation of the M1 distance: discrete Fréchet distance (sup-norm
// ground metric) between the completed graphs, each segment cut into
// `resolution` equal pieces. Non-increasing under doubling of the resolution,
// and within m1_discretization(f, g, resolution) of the true value.
double m1_distance(const CadlagStep& f, const CadlagStep& g, std::size_t resolution);
double m1_discretization(const CadlagStep& f, const CadlagStep& g, std::size_t resolution);

}  // namespace trapwalk
