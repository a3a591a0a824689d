#pragma once

#include "srcomb/model.hpp"
#include "srcomb/ode.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace srcomb {

struct IntegrateOptions {
  OdeOptions ode;
  double t0 = 0.0;
  double dt_out = 0.1;  // uniform output stride; <= 0 records every accepted step
};

template <class State>
struct BasicTrajectory {
  std::vector<double> t;
  std::vector<State> states;
  StepStats stats;
  double rtol = 0, atol = 0;

  std::size_t size() const { return t.size(); }
};

using Trajectory = BasicTrajectory<SpinState>;
using ReducedTrajectory = BasicTrajectory<ReducedState>;
using GroupTrajectory = BasicTrajectory<GroupState>;

Trajectory integrate(const SpinState& initial, const ModelParams& p, double t_end,
                     const IntegrateOptions& opt = {});
ReducedTrajectory integrate(const ReducedState& initial, const ModelParams& p, double t_end,
                            const IntegrateOptions& opt = {});
// Integrates the five group variables together with Phi.
GroupTrajectory integrate(const GroupState& initial, const ModelParams& p, double t_end,
                          const IntegrateOptions& opt = {});

// Final state only, for two ensembles.
Vec6 advance(const Vec6& x, const ModelParams& p, double duration, const OdeOptions& opt = {});

void write_csv(std::ostream& os, const Trajectory& tr);
void write_csv(const std::string& path, const Trajectory& tr);

}  // namespace srcomb
