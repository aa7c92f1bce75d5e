#pragma once

// Seeded family of toric test instances: fans, opens, squares, morphisms.

#include <cstdint>
#include <string>
#include <vector>

#include "motivic/csupport.hpp"
#include "motivic/span_site.hpp"
#include "motivic/toric.hpp"

namespace motivic::corpus {

/// Bumped whenever the generation recipe changes; reports carry it.
inline constexpr const char* kRecipe = "corpus-recipe/1";

struct OpenPair {
  toric::ToricObject x, u;
};

struct CompletionPair {
  toric::ToricObject open;
  csupport::CompactificationChoice a, b;
};

struct ProductPair {
  toric::ToricObject x, y;
};

struct CoverTriple {
  toric::ToricObject x, u, v;
};

struct Corpus {
  std::uint64_t seed = 0;
  std::size_t size = 0;
  /// Smooth complete fans, labelled.
  std::vector<toric::ToricObject> fans;
  /// Non-complete fans; rank 2 ones exercise the angular completion.
  std::vector<toric::ToricObject> partial_fans;
  std::vector<OpenPair> additivity;
  std::vector<CompletionPair> independence;
  std::vector<toric::StarSubdivision> blowups;
  std::vector<std::string> expressions;
  std::vector<ProductPair> kunneth;
  std::vector<CoverTriple> mayer_vietoris;
  /// Squares, stacked squares and morphisms into their bases.
  site::SitePresentation site;
};

/// Deterministic in (seed, size). Counts scale with size: 4*size additivity
/// pairs, size completion pairs, blowups and triples, 2*size expressions and
/// products.
Corpus generate(std::uint64_t seed, std::size_t size);

}  // namespace motivic::corpus
