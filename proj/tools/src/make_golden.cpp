// Regenerates the exact-statistics golden file: fkpp_make_golden <output.csv> [T]
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include "fkpp/grid.hpp"
#include "fkpp/test_problem.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: fkpp_make_golden <output.csv> [T]\n";
        return 2;
    }
    const double t = argc > 2 ? std::strtod(argv[2], nullptr) : 0.01;
    const fkpp::Grid1D grid(1.0, 10);
    const auto stats = fkpp::exact_statistics(grid, t, fkpp::reference_reaction_law());
    std::ofstream out(argv[1], std::ios::binary);
    out << "x,mean_exact,std_exact\n";
    char buf[128];
    for (int i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g\n", stats.x(i), stats.mean(i), stats.std(i));
        out << buf;
    }
    return out ? 0 : 1;
}
