#ifndef STOCHSUP_TESTS_FIXTURES_HPP
#define STOCHSUP_TESTS_FIXTURES_HPP

#include "stochsup/model.hpp"

namespace testsupport {

// Line metric: f1@0, f2@10 with c1 = (5, 5); clients c1@1, c2@9; R = 2.
// A1 = {c1}, p = .5, c2 = (2, 2); A2 = {c1, c2}, p = .5, c2 = (2, 8).
stochsup::Instance e1_instance(double budget = 9.0, stochsup::StageOneConstraint constraint = stochsup::Unconstrained{});
stochsup::Distribution e1_distribution(const stochsup::Instance& instance);

// Points on a line at the given coordinates, clients then facilities.
std::shared_ptr<const stochsup::Geometry> line_geometry(const std::vector<double>& clients,
                                                       const std::vector<double>& facilities);

}  // namespace testsupport

#endif
