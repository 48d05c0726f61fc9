#include <numeric>

#include "gad/errors.hpp"
#include "gad/numeric/rng.hpp"
#include "gad/ssl/infomax.hpp"

namespace gad {

CorruptedView corrupt(const DenseMatrix& x, std::uint64_t seed) {
    const std::size_t n = x.rows();
    if (n < 2) throw ShapeError("corrupt: need at least 2 rows, got " + x.shape_string());
    CorruptedView view;
    view.seed = seed;
    view.permutation.resize(n);
    Rng rng(seed);
    bool identity = true;
    while (identity) {
        std::iota(view.permutation.begin(), view.permutation.end(), std::size_t{0});
        rng.shuffle(view.permutation);
        for (std::size_t i = 0; i < n && identity; ++i) identity = view.permutation[i] == i;
    }
    view.x = DenseMatrix(n, x.cols());
    for (std::size_t i = 0; i < n; ++i)
        std::copy_n(x.row(view.permutation[i]).data(), x.cols(), view.x.row(i).data());
    return view;
}

}  // namespace gad
