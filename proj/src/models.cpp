#include "malcev/models.hpp"

#include <stdexcept>

namespace malcev::models {

namespace {

using Products = std::map<std::pair<std::size_t, std::size_t>, SparseVec>;

SparseVec e(std::size_t i, int c = 1) { return {{i, Rational(c)}}; }

}  // namespace

std::shared_ptr<DGAModel> circle() {
  return std::make_shared<DGAModel>(std::vector<std::string>{"1", "w"}, std::vector<int>{0, 1}, 0,
                                    std::vector<SparseVec>(2), Products{});
}

std::shared_ptr<DGAModel> wedge(int k) {
  if (k < 1) throw std::invalid_argument("wedge needs at least one circle");
  std::vector<std::string> labels{"1"};
  std::vector<int> degrees{0};
  for (int i = 1; i <= k; ++i) {
    labels.push_back("w" + std::to_string(i));
    degrees.push_back(1);
  }
  return std::make_shared<DGAModel>(labels, degrees, 0, std::vector<SparseVec>(labels.size()), Products{});
}

std::shared_ptr<DGAModel> circle_with_cell() {
  std::vector<SparseVec> d(4);
  d[2] = e(3);
  return std::make_shared<DGAModel>(std::vector<std::string>{"1", "w", "b", "a"}, std::vector<int>{0, 1, 1, 2}, 0,
                                    d, Products{});
}

std::shared_ptr<DGAModel> circle_tensor_cell() {
  // 0:1 1:w 2:b 3:a 4:wb 5:wa
  std::vector<SparseVec> d(6);
  d[2] = e(3);
  d[4] = e(5, -1);  // d(wb) = -w db
  Products p;
  p[{1, 2}] = e(4);
  p[{1, 3}] = e(5);
  return std::make_shared<DGAModel>(std::vector<std::string>{"1", "w", "b", "a", "wb", "wa"},
                                    std::vector<int>{0, 1, 1, 2, 2, 3}, 0, d, p);
}

std::shared_ptr<DGAModel> torus() {
  Products p;
  p[{1, 2}] = e(3);
  return std::make_shared<DGAModel>(std::vector<std::string>{"1", "x", "y", "xy"}, std::vector<int>{0, 1, 1, 2}, 0,
                                    std::vector<SparseVec>(4), p);
}

std::shared_ptr<DGAModel> circle_sigma2() {
  auto m = circle_with_cell();
  auto g = std::make_shared<FiniteGroup>(FiniteGroup::symmetric(2));
  std::vector<std::vector<SparseVec>> images(2);
  images[0] = {e(0), e(1), e(2), e(3)};
  images[1] = {e(0), e(1), e(2, -1), e(3, -1)};
  m->set_action(g, images);
  return m;
}

std::shared_ptr<DGAModel> torus_swap() {
  auto m = torus();
  auto g = std::make_shared<FiniteGroup>(FiniteGroup::symmetric(2));
  std::vector<std::vector<SparseVec>> images(2);
  images[0] = {e(0), e(1), e(2), e(3)};
  images[1] = {e(0), e(2), e(1), e(3, -1)};
  m->set_action(g, images);
  return m;
}

std::vector<std::string> names() {
  return {"circle", "wedge2", "wedge3", "circle_cell", "circle_tensor_cell", "torus", "circle_sigma2", "torus_swap"};
}

std::shared_ptr<DGAModel> by_name(const std::string& name) {
  if (name == "circle") return circle();
  if (name == "wedge2") return wedge(2);
  if (name == "wedge3") return wedge(3);
  if (name == "circle_cell") return circle_with_cell();
  if (name == "circle_tensor_cell") return circle_tensor_cell();
  if (name == "torus") return torus();
  if (name == "circle_sigma2") return circle_sigma2();
  if (name == "torus_swap") return torus_swap();
  throw std::invalid_argument("unknown built-in model '" + name + "'");
}

}  // namespace malcev::models
