#pragma once

#include <functional>
#include <string>
#include <vector>

#include "projektor/johnson.hpp"
#include "projektor/subspace.hpp"
#include "projektor/transport.hpp"

namespace projektor {

enum class Family { Bk, Slownono, Example5, Not3, Johnbio };
const char* to_string(Family f) noexcept;
Family parse_family(const std::string& s);

struct GalleryConfig {
  Family family = Family::Slownono;
  int K = 3;
  int J = 10;                    // block truncation (BK, SLOWNONO, NOT3)
  std::vector<FourSet> V;        // JOHNBIO
  std::vector<int> alpha;        // JOHNBIO, one entry per V member
  int n_max = 20;                // JOHNBIO
  std::vector<double> epsilons;  // EXAMPLE5 per-block targets; empty means 2^{-i-2}, i = 1..6

  int subspace_count() const;
};

void validate(const GalleryConfig& cfg);

// Block j = 1..J occupies coordinates 3(j-1), 3(j-1)+1, 3(j-1)+2 (the e_{3j}, e_{3j+1}, e_{3j+2} triple).
std::vector<Subspace> build_bk(int J);
// Block j occupies coordinates 2(j-1), 2(j-1)+1.
std::vector<Subspace> build_slownono(int J);
std::vector<Subspace> build_not3(int K, int J);
// Blocks follow sorted V; inside block A the five families are interleaved by n:
// coordinate 5 (b n_max + n - 1) holds e^A_n, the next four hold e^A_{i,n} for i in A ascending.
std::vector<Subspace> build_johnbio(int K, const std::vector<FourSet>& V, const std::vector<int>& alpha,
                                    int n_max);

struct Example5Build {
  std::vector<Subspace> subspaces;  // L_1 = X, L_2 = Y, L_3 = Z, L_4 .. L_K
  std::vector<Vec> e;               // e_1 .. e_{n+1}
  TransportPlan plan;
  std::vector<int> schedule;        // indices into subspaces, application order
  std::vector<std::size_t> boundaries;  // schedule prefix length after each A_i
  double composite_loss = 0.0;      // |A_n ... A_1 e_1 - e_{n+1}|
};

// Throws CONSTRUCTION_FAILED when the transport plan is not accepted and strict is set.
Example5Build build_example5(int K, const std::vector<double>& epsilons, bool strict = true);

// Truncation parameter: J for BK, SLOWNONO, NOT3; n_max for JOHNBIO; ignored for EXAMPLE5.
std::vector<Subspace> build_config(const GalleryConfig& cfg, int truncation);
int default_truncation(const GalleryConfig& cfg);
std::string layout_description(const GalleryConfig& cfg);

struct ClassifyOptions {
  double decay = 10.0;
};
Labels classify_fourtuples(const std::function<std::vector<Subspace>(int)>& constructor, int K,
                           const std::vector<int>& ladder, const ClassifyOptions& options = {});

std::string config_to_json(const GalleryConfig& cfg);
GalleryConfig config_from_json(const std::string& text);

}  // namespace projektor
