#pragma once

#include <optional>
#include <string>
#include <vector>

#include "anosov/estimates.hpp"
#include "anosov/morse.hpp"

namespace anosov {

/// One free-product factor: a named subgroup given by generators, with the
/// radius of the generator-word ball used to sample it.
struct GroupSpec {
  std::string name;
  std::vector<GroupElement> generators;
  int ball_radius = 1;
};

/// A nontrivial element of one factor: a freely reduced generator word
/// (signed 1-based letters) and its evaluated matrix.
struct Syllable {
  int factor = 0;
  std::vector<int> letters;
  GroupElement value;
};

/// A reduced word of the free product: syllables from pairwise distinct
/// adjacent factors, stored left to right. The value multiplies them in
/// that order, and the orbit path visits the prefix images of the
/// basepoint, so the first stored syllable moves the basepoint first.
struct ReducedWord {
  std::vector<Syllable> syllables;

  [[nodiscard]] int letter_length() const;
  [[nodiscard]] GroupElement value(int dim) const;

  /// Human form, leftmost syllable first.
  [[nodiscard]] std::string display(const std::vector<GroupSpec>& groups) const;
};

/// The ball of one factor: values of freely reduced generator words of
/// length <= ball_radius, identity values dropped (id_tol), duplicates
/// dropped keeping the lexicographically first word.
[[nodiscard]] std::vector<Syllable> factor_ball(const GroupSpec& group, int factor_index,
                                                double id_tol = tol::id);

/// All reduced words with 1..max_syllables syllables drawn from the factor
/// balls, ordered by syllable count then lexicographically.
[[nodiscard]] std::vector<ReducedWord> enumerate_reduced_words(
    const std::vector<GroupSpec>& groups, int max_syllables);

/// Orbit path of a word: basepoint, then the partial products applied to
/// it, parameterized by cumulative letter length.
[[nodiscard]] PathSample orbit_path(const ReducedWord& word,
                                    const std::vector<GroupSpec>& groups, const Point& x);

/// Midpoint coarsening of a path: first knot, geodesic midpoints of
/// consecutive knots except the last pair, last knot.
[[nodiscard]] std::vector<FactoredPoint> midpoint_sequence(const PathSample& path);

struct CertifyTargets {
  /// Straightness target for midpoint sequences; <= 0 picks pi/6.
  double eps_max = 0.0;
  /// Spacing target; <= 0 picks the derived spacing bound.
  double l_min = 0.0;
  /// Diamond closeness target for orbit paths; <= 0 picks 2D + 1.
  double D_max = 0.0;
};

struct CertificateConditions {
  double S = 0.0;                  // smallest ball-element displacement
  bool displacement_pass = false;  // S >= 2 R1
  bool theta_regular = false;      // every ball segment regular for the inner cone
  double min_margin = 0.0;         // smallest cross-family antipodality margin
  bool antipodal_pass = false;
  double eps_measured = 0.0;       // worst midpoint straightness defect
  double l_measured = 0.0;         // smallest midpoint spacing
  bool straightness_pass = false;
  double D_measured = 0.0;         // worst diamond defect over orbit paths
  bool morse_pass = false;
  double L_fit = 1.0;              // fitted quasigeodesic constants over all words
  double A_fit = 0.0;
};

struct CertificateConstants {
  double D = 0.0;           // parallel-set closeness of the basepoint
  double alpha = 0.0;       // angular gap between the nested cones
  double R1 = 0.0;          // scale threshold derived from D and alpha
  double delta_flag = 0.0;  // certified flag thickening radius
  double spacing = 0.0;     // guaranteed midpoint spacing at displacement S
  double L_req = 0.0;       // quasigeodesic constants the orbit paths were checked at
  double A_req = 0.0;
  double D_req = 0.0;       // diamond closeness the orbit paths were checked at
};

enum class Verdict { certified, refuted, inconclusive };

[[nodiscard]] std::string to_string(Verdict v);

struct Certificate {
  CertificateConditions conditions;
  CertificateConstants constants;
  std::optional<ReducedWord> counterexample;
  Verdict verdict = Verdict::inconclusive;
  /// Approximation caveats (ball truncation, word truncation).
  std::vector<std::string> notes;
};

/// Run the combination certifier: sample the factor balls, verify the
/// hard hypotheses (nontrivial displacement, cone regularity of generator
/// segments, cross-family transversality), derive the scale constants, and
/// check every enumerated word's orbit path for straightness, spacing, and
/// diamond closeness. Hard hypothesis violations give Verdict::refuted with
/// a witness word; soft target misses give Verdict::inconclusive.
[[nodiscard]] Certificate certify_combination(const std::vector<GroupSpec>& groups,
                                              const Point& x, const ThetaSpec& theta,
                                              const ThetaSpec& theta_prime,
                                              const CertifyTargets& targets = {},
                                              int max_syllables = 4,
                                              double id_tol = tol::id,
                                              int pair_budget = tol::pair_budget);

struct FreenessReport {
  int free_up_to = 0;
  std::optional<ReducedWord> counterexample;
  /// Least-squares displacement growth per letter and the additive defect
  /// making d(x, wx) >= growth * |w| - offset valid on the ball.
  double growth = 0.0;
  double offset = 0.0;
  bool pass = false;
};

/// Check that no enumerated reduced word evaluates to the identity and fit
/// displacement growth over the ball.
[[nodiscard]] FreenessReport verify_freeness_ball(const std::vector<GroupSpec>& groups,
                                                  const Point& x, int max_syllables,
                                                  double id_tol = tol::id);

/// Raise elements to a power, each becoming a rank-one factor. Requires
/// every element to have eigenvalue-modulus gaps at the pattern dimensions
/// (after powering) above gap_tol; throws NotProximal with the element
/// index otherwise.
[[nodiscard]] std::vector<GroupSpec> schottky_powers(const std::vector<GroupElement>& elements,
                                                     int power, const FacePattern& pattern,
                                                     double gap_tol = tol::gap);

}  // namespace anosov
