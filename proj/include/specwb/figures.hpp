#pragma once

#include "specwb/spectrum.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace specwb {

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_table_csv(std::ostream& out, const Table& t);
nlohmann::json table_to_json(const Table& t);

// Evenly spaced grid k·step, k = 1..floor(max/step).
std::vector<double> lambda_grid(double max, double step);

namespace figures {

std::vector<std::string> names();

// [0,10]² Neumann: lambda,N,weyl,upper.
Table quantitative_weyl_rect(double lambda_max = 10.0, double step = 0.01);
// First `count` Dirichlet pairs of [0,2]×[0,3] (R) and [0,1]² (S):
// k,lambda_R,lambda_S,ratio,lo,hi.
Table metric_cone_pairs(std::size_t count = 100);
// Wide table lambda,N_L10,…,N_L90,weyl, then one lambda,N,weyl table per
// rectangle L × 100/L.
std::vector<Table> multiple_rects(Boundary bc, double lambda_max = 100.0, double step = 0.01);
// For L × 100/L against [0,10]² over the first 1000 eigenvalues: fraction of
// indices with Dirichlet λ_k(R) < λ_k(S) and with Neumann λ_k(R) > λ_k(S).
Table rect_square_1000(double step = 0.005);
// n, mean_15, mean_18, mean_21 (subspectral mean of [0,10]² over R).
Table subspectral_mean_series(std::size_t n = 1000);
// lambda,N,weyl up to level k_max.
Table sphere(int n, int k_max, double step);
// Eigenvalues of seeded pentagons and their vertices.
std::vector<Table> random_pentagons(const std::vector<std::uint64_t>& seeds, std::size_t count, double max_area);
// Disk plus seeded annuli.
Table random_annuli(const std::vector<std::uint64_t>& seeds, std::size_t count, int n_seg, double max_area);

} // namespace figures
} // namespace specwb
