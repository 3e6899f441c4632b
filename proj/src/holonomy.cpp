#include "geophase/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace geophase {

namespace {

using Frame = Eigen::Matrix<std::complex<double>, 4, Eigen::Dynamic, 0, 4, 4>;
using Small = Operator<double, Eigen::Dynamic>;

// Contiguous index ranges [first, last) of the ascending spectrum.
struct Cluster {
  int first;
  int last;
  int size() const { return last - first; }
};

std::string describe_step(int k, int n) {
  std::ostringstream os;
  os << "at s = " << k << "/" << n;
  return os.str();
}

std::vector<Cluster> cluster_levels(const Eigen::Vector4d& energies, double scale,
                                    const TrackingOptions& options, int k, int n) {
  std::vector<Cluster> clusters{{0, 1}};
  for (int i = 0; i + 1 < 4; ++i) {
    const double gap = energies(i + 1) - energies(i);
    if (gap <= options.exact_degeneracy * scale) {
      clusters.back().last = i + 2;
      continue;
    }
    if (gap < options.gap_threshold) {
      std::ostringstream os;
      os << "levels " << i + 1 << " and " << i + 2 << " are " << gap << " apart "
         << describe_step(k, n) << " (gap threshold " << options.gap_threshold << ")";
      throw Error(ErrorCode::GapCollapse, os.str());
    }
    clusters.push_back({i + 1, i + 2});
  }
  return clusters;
}

bool same_partition(const std::vector<Cluster>& a, const std::vector<Cluster>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || a[i].last != b[i].last) return false;
  }
  return true;
}

// S^{-1/2} for a small Hermitian positive-definite overlap matrix.
Small inverse_sqrt(const Small& s) {
  const auto es = hermitian_eigensystem<double, Eigen::Dynamic>(s);
  Eigen::VectorXd d = es.eigenvalues.cwiseMax(0.0);
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    if (d(i) < kZeroOverlap) {
      throw Error(ErrorCode::StepAmbiguity,
                  "degenerate frame collapsed under projection; increase the number of loop "
                  "samples N");
    }
    d(i) = 1.0 / std::sqrt(d(i));
  }
  return es.eigenvectors * d.cast<std::complex<double>>().asDiagonal() *
         es.eigenvectors.adjoint();
}

Frame initial_frame(const Eigensystem<double, 4>& es, const Cluster& c) {
  const Frame basis = es.eigenvectors.middleCols(c.first, c.size());
  if (c.size() == 1) return basis;
  Small compressed = basis.adjoint() * total_sz() * basis;
  compressed = (compressed + compressed.adjoint().eval()) * 0.5;
  const auto tie_break = hermitian_eigensystem<double, Eigen::Dynamic>(compressed);
  return basis * tie_break.eigenvectors;
}

}  // namespace

std::array<EigenPath, 4> track_eigenpaths(const ModelParams& params,
                                          const TrackingOptions& options) {
  params.validate();
  return track_eigenpaths([&](double s) { return hamiltonian(params, s); }, params.n_time,
                          options);
}

std::array<EigenPath, 4> track_eigenpaths(const std::function<Operator4(double)>& loop,
                                          int n_time, const TrackingOptions& options) {
  if (n_time < 1) throw Error(ErrorCode::InvalidArgument, "n_time must be positive");
  const int n = n_time;

  std::vector<Eigensystem<double, 4>> spectra;
  spectra.reserve(static_cast<std::size_t>(n) + 1);
  std::vector<Cluster> partition;
  std::array<double, 4> min_gap;
  min_gap.fill(std::numeric_limits<double>::infinity());

  for (int k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    const Operator4 h = loop(s);
    spectra.push_back(hermitian_eigensystem<double, 4>(h));
    const Eigen::Vector4d& e = spectra.back().eigenvalues;
    const double scale = std::max(1.0, max_abs(h));
    auto clusters = cluster_levels(e, scale, options, k, n);
    if (k == 0) {
      partition = std::move(clusters);
    } else if (!same_partition(partition, clusters)) {
      throw Error(ErrorCode::GapCollapse,
                  "degeneracy pattern changes " + describe_step(k, n) + " (level crossing)");
    }
    for (const Cluster& c : partition) {
      double gap = std::numeric_limits<double>::infinity();
      if (c.first > 0) gap = std::min(gap, e(c.first) - e(c.first - 1));
      if (c.last < 4) gap = std::min(gap, e(c.last) - e(c.last - 1));
      for (int i = c.first; i < c.last; ++i) min_gap[i] = std::min(min_gap[i], gap);
    }
  }

  std::array<EigenPath, 4> paths;
  for (int i = 0; i < 4; ++i) {
    paths[i].label = i + 1;
    paths[i].samples.resize(static_cast<std::size_t>(n) + 1);
    paths[i].energies.resize(static_cast<std::size_t>(n) + 1);
    paths[i].min_gap = min_gap[i];
  }

  std::vector<Frame> frames;
  for (const Cluster& c : partition) frames.push_back(initial_frame(spectra[0], c));

  auto store = [&](int k) {
    for (std::size_t ci = 0; ci < partition.size(); ++ci) {
      const Cluster& c = partition[ci];
      for (int i = c.first; i < c.last; ++i) {
        paths[i].samples[k] = frames[ci].col(i - c.first);
        paths[i].energies[k] = spectra[k].eigenvalues(i);
      }
    }
  };
  store(0);

  for (int k = 0; k < n; ++k) {
    const Operator4& next = spectra[k + 1].eigenvectors;

    // Singletons: match by maximum overlap over the singleton eigenvectors.
    std::array<bool, 4> taken{};
    for (const Cluster& c : partition) {
      if (c.size() > 1) std::fill(taken.begin() + c.first, taken.begin() + c.last, true);
    }
    for (std::size_t ci = 0; ci < partition.size(); ++ci) {
      const Cluster& c = partition[ci];
      if (c.size() != 1) continue;
      const Ket4 prev = frames[ci].col(0);
      int best = -1;
      double best_mag = -1.0;
      for (int j = 0; j < 4; ++j) {
        if (taken[j]) continue;
        const double mag = std::abs(overlap<4>(prev, next.col(j)));
        if (mag > best_mag) {
          best_mag = mag;
          best = j;
        }
      }
      if (best != c.first || best_mag < options.overlap_threshold) {
        std::ostringstream os;
        os << "level " << c.first + 1 << " has best step overlap " << best_mag << " "
           << describe_step(k + 1, n) << "; increase the number of loop samples N";
        throw Error(ErrorCode::StepAmbiguity, os.str());
      }
      taken[best] = true;
      frames[ci] = next.col(best);
      paths[c.first].min_step_overlap = std::min(paths[c.first].min_step_overlap, best_mag);
    }

    // Degenerate clusters: project the old frame and re-orthonormalize.
    for (std::size_t ci = 0; ci < partition.size(); ++ci) {
      const Cluster& c = partition[ci];
      if (c.size() == 1) continue;
      const Frame basis = next.middleCols(c.first, c.size());
      const Frame projected = basis * (basis.adjoint() * frames[ci]);
      const Small gram = projected.adjoint() * projected;
      const Frame moved = projected * inverse_sqrt((gram + gram.adjoint().eval()) * 0.5);
      for (int i = 0; i < c.size(); ++i) {
        const double mag = std::abs(overlap<4>(Ket4(frames[ci].col(i)), Ket4(moved.col(i))));
        if (mag < options.overlap_threshold) {
          std::ostringstream os;
          os << "degenerate level " << c.first + i + 1 << " has step overlap " << mag << " "
             << describe_step(k + 1, n) << "; increase the number of loop samples N";
          throw Error(ErrorCode::StepAmbiguity, os.str());
        }
        paths[c.first + i].min_step_overlap =
            std::min(paths[c.first + i].min_step_overlap, mag);
      }
      frames[ci] = moved;
    }
    store(k + 1);
  }

  // Closure: each path must return to its starting ray, and a degenerate
  // cluster's holonomy must not rotate the frame.
  for (std::size_t ci = 0; ci < partition.size(); ++ci) {
    const Cluster& c = partition[ci];
    Small holonomy(c.size(), c.size());
    for (int a = 0; a < c.size(); ++a)
      for (int b = 0; b < c.size(); ++b)
        holonomy(a, b) = overlap<4>(paths[c.first + a].samples[n], paths[c.first + b].samples[0]);
    for (int a = 0; a < c.size(); ++a) {
      if (std::abs(holonomy(a, a)) < options.overlap_threshold) {
        std::ostringstream os;
        os << "level " << c.first + a + 1 << " does not return to its starting ray (overlap "
           << std::abs(holonomy(a, a)) << ")";
        throw Error(c.size() > 1 ? ErrorCode::GapCollapse : ErrorCode::StepAmbiguity, os.str());
      }
      for (int b = 0; b < c.size(); ++b) {
        const double defect = a == b ? std::abs(holonomy(a, a) - holonomy(0, 0))
                                     : std::abs(holonomy(a, b));
        if (defect > 1e-6) {
          throw Error(ErrorCode::GapCollapse,
                      "degenerate levels carry a non-Abelian holonomy; individual phases are "
                      "basis dependent");
        }
      }
    }
  }
  return paths;
}

}  // namespace geophase
