#pragma once

// Built-in finite DGA models used by the CLI, tests and the data corpus.

#include "malcev/bar.hpp"

#include <memory>
#include <string>
#include <vector>

namespace malcev::models {

/// <1, w>, |w| = 1.
std::shared_ptr<DGAModel> circle();
/// <1, w_1..w_k>, all products of positive-degree elements zero.
std::shared_ptr<DGAModel> wedge(int k);
/// circle with an acyclic pair adjoined: b (degree 1), a (degree 2), db = a.
std::shared_ptr<DGAModel> circle_with_cell();
/// circle tensor the acyclic algebra <1, b, a>: basis 1, w, b, a, wb, wa.
std::shared_ptr<DGAModel> circle_tensor_cell();
/// exterior algebra on x, y of degree 1.
std::shared_ptr<DGAModel> torus();
/// circle_with_cell with the symmetric group of order 2 fixing w and negating b, a.
std::shared_ptr<DGAModel> circle_sigma2();
/// torus with the symmetric group of order 2 swapping x and y.
std::shared_ptr<DGAModel> torus_swap();

std::vector<std::string> names();
/// Throws std::invalid_argument for an unknown name.
std::shared_ptr<DGAModel> by_name(const std::string& name);

}  // namespace malcev::models
