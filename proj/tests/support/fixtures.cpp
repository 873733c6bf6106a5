#include "fixtures.hpp"

namespace testsupport {

using namespace stochsup;

std::shared_ptr<const Geometry> line_geometry(const std::vector<double>& clients, const std::vector<double>& facilities) {
  std::vector<std::string> cn, fn;
  std::vector<Geometry::Point> cp, fp;
  for (std::size_t j = 0; j < clients.size(); ++j) {
    cn.push_back("c" + std::to_string(j + 1));
    cp.push_back({clients[j]});
  }
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    fn.push_back("f" + std::to_string(i + 1));
    fp.push_back({facilities[i]});
  }
  return std::make_shared<const Geometry>(Geometry::from_points(cn, cp, fn, fp));
}

Instance e1_instance(double budget, StageOneConstraint constraint) {
  return Instance(line_geometry({1.0, 9.0}, {0.0, 10.0}), {2.0, 2.0}, {5.0, 5.0}, std::move(constraint), budget);
}

Distribution e1_distribution(const Instance& instance) {
  std::vector<Scenario> s;
  s.push_back({"A1", {0}, {2.0, 2.0}, 0.5});
  s.push_back({"A2", {0, 1}, {2.0, 8.0}, 0.5});
  return Distribution(std::move(s), instance);
}

}  // namespace testsupport
