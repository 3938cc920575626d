#pragma once

// Comparison samplers: single-site Gibbs for the two AR(1) toys and
// Euclidean-metric HMC with identity mass.  These reproduce the failure
// modes the position-dependent metric removes.

#include "mcrmhmc/models/funnel_ar1.hpp"
#include "mcrmhmc/models/twisted_ar1.hpp"
#include "mcrmhmc/rng.hpp"
#include "mcrmhmc/sampler.hpp"

namespace mcrmhmc {

// Exact Gaussian conditional updates for the latents, random-walk MH with
// proposal sd r_gibbs for x_d.  Records every thin-th sweep; the record's
// acceptance_rate is the x_d update rate.
ChainRecord gibbs_twisted(const TwistedAr1& model, double r_gibbs, long n_iter, int thin,
                          Rng& rng);

// Full conjugate Gibbs: Gaussian latent conditionals, gamma-form conditional
// for the innovation precision drawn on the log scale.
ChainRecord gibbs_funnel(const FunnelAr1& model, long n_iter, int thin, Rng& rng);

// Standard leapfrog with identity mass, jittered step size, uniform l.
ChainRecord ehmc(const TargetModel& model, double epsilon, int l_min, int l_max, int n_iter,
                 Rng& rng, double jitter_fraction = 0.15);

}  // namespace mcrmhmc
