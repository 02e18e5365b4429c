#include "jnr/oracle.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

namespace jnr::oracle {

namespace {

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double halton(long long index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

} // namespace

SampleCloud sample_range(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                         const Eigen::VectorXd& lo, const Eigen::VectorXd& hi, int count,
                         unsigned seed) {
    const int n = f.dim();
    if (count < 1) throw std::invalid_argument("sample_range: count must be >= 1");
    if (lo.size() != n || hi.size() != n)
        throw std::invalid_argument("sample_range: box dimension mismatch");
    for (int i = 0; i < n; ++i)
        if (!(lo[i] < hi[i])) throw std::invalid_argument("sample_range: degenerate box");
    if (n > static_cast<int>(std::size(kPrimes)))
        throw std::invalid_argument("sample_range: dimension too large for the Halton bases");

    // Halton points with a seeded per-dimension rotation keeps the cloud
    // low-discrepancy and byte-deterministic per seed.
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd shift(n);
    for (int i = 0; i < n; ++i) shift[i] = unif(rng);

    SampleCloud cloud;
    cloud.lo = lo;
    cloud.hi = hi;
    cloud.count = count;
    cloud.points.reserve(count);
    for (int s = 0; s < count; ++s) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) {
            double u = halton(s + 1, kPrimes[i]) + shift[i];
            u -= std::floor(u);
            x[i] = lo[i] + (hi[i] - lo[i]) * u;
        }
        cloud.points.push_back(core::JointRangePoint::from_witness(f, g, x));
    }
    return cloud;
}

BruteResult brute_min_po4(const core::CompositeProblem& p, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi, int grid_per_dim) {
    const int n = p.n();
    if (n > 4) throw std::invalid_argument("brute_min_po4: n <= 4 enforced");
    if (grid_per_dim < 2) throw std::invalid_argument("brute_min_po4: grid too small");
    if (lo.size() != n || hi.size() != n)
        throw std::invalid_argument("brute_min_po4: box dimension mismatch");

    BruteResult best;
    best.value = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x(n);
    std::vector<int> idx(n, 0);
    const long long total = static_cast<long long>(std::pow(grid_per_dim, n));
    for (long long t = 0; t < total; ++t) {
        long long rem = t;
        for (int i = 0; i < n; ++i) {
            idx[i] = static_cast<int>(rem % grid_per_dim);
            rem /= grid_per_dim;
            x[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / (grid_per_dim - 1.0);
        }
        const Eigen::Vector2d z = p.range_point(x);
        if (p.linear_violation(z) > 1e-9) continue;
        const double val = p.objective(z);
        // deterministic tie-break on lexicographically smaller x
        if (val < best.value ||
            (val == best.value && best.feasible_found &&
             std::lexicographical_compare(x.data(), x.data() + n, best.x.data(),
                                          best.x.data() + n))) {
            best.feasible_found = true;
            best.value = val;
            best.x = x;
        }
    }
    return best;
}

int convexity_probe(const core::QuadraticFunction& f, const core::QuadraticFunction& g,
                    const SampleCloud& cloud, int pairs, const recovery::NewtonOptions& newton,
                    unsigned seed) {
    if (cloud.points.empty()) throw std::invalid_argument("convexity_probe: empty cloud");
    if (cloud.points.size() < 2 || pairs <= 0) return 0;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cloud.points.size() - 1);
    int violations = 0;
    for (int t = 0; t < pairs; ++t) {
        const auto& a = cloud.points[pick(rng)];
        const auto& b = cloud.points[pick(rng)];
        const Eigen::Vector2d mid = 0.5 * (a.z + b.z);
        if (!recovery::newton_root(f, g, mid, newton)) ++violations;
    }
    return violations;
}

void write_csv(const SampleCloud& cloud, std::ostream& os) {
    const int n = cloud.lo.size() > 0 ? static_cast<int>(cloud.lo.size()) : 0;
    for (int i = 0; i < n; ++i) os << 'x' << (i + 1) << ',';
    os << "z1,z2\n";
    os.precision(17);
    for (const auto& pt : cloud.points) {
        if (pt.witness_x)
            for (int i = 0; i < pt.witness_x->size(); ++i) os << (*pt.witness_x)[i] << ',';
        os << pt.z[0] << ',' << pt.z[1] << '\n';
    }
}

} // namespace jnr::oracle
