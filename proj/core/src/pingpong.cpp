#include "anosov/pingpong.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anosov {

int ReducedWord::letter_length() const {
  int n = 0;
  for (const Syllable& s : syllables) n += static_cast<int>(s.letters.size());
  return n;
}

GroupElement ReducedWord::value(int dim) const {
  GroupElement g = GroupElement::identity(dim);
  for (const Syllable& s : syllables) g = g * s.value;
  return g;
}

std::string ReducedWord::display(const std::vector<GroupSpec>& groups) const {
  std::string out;
  for (const Syllable& s : syllables) {
    if (!out.empty()) out += "*";
    out += (s.factor < static_cast<int>(groups.size())) ? groups[s.factor].name
                                                        : std::to_string(s.factor);
    out += "(";
    for (std::size_t k = 0; k < s.letters.size(); ++k) {
      if (k > 0) out += ",";
      out += std::to_string(s.letters[k]);
    }
    out += ")";
  }
  return out;
}

std::vector<Syllable> factor_ball(const GroupSpec& group, int factor_index, double id_tol) {
  if (group.generators.empty()) throw RangeError("factor has no generators");
  if (group.ball_radius < 1) throw RangeError("ball radius must be at least 1");
  const int g = static_cast<int>(group.generators.size());
  const int d = group.generators.front().dim();
  std::vector<Matrix> letter_value(2 * g);
  for (int i = 0; i < g; ++i) {
    if (group.generators[i].dim() != d) {
      throw PatternMismatch("factor generators have mixed dimensions");
    }
    letter_value[2 * i] = group.generators[i].mat();
    letter_value[2 * i + 1] = group.generators[i].inverse().mat();
  }
  // Letter keys order +1, -1, +2, -2, ...; key 2i is generator i+1, key
  // 2i+1 its inverse.
  const auto key_to_letter = [](int key) {
    return (key % 2 == 0) ? (key / 2 + 1) : -(key / 2 + 1);
  };

  struct Partial {
    std::vector<int> letters;
    Matrix value;
  };
  std::vector<Partial> frontier;
  std::vector<Syllable> ball;
  const Matrix id = Matrix::Identity(d, d);
  const auto try_accept = [&](const Partial& w) {
    if ((w.value - id).norm() <= id_tol) return;
    for (const Syllable& s : ball) {
      if ((s.value.mat() - w.value).norm() <= 1e-12 * (1.0 + w.value.norm())) return;
    }
    ball.push_back(Syllable{factor_index, w.letters, GroupElement::from_matrix(w.value)});
  };

  for (int key = 0; key < 2 * g; ++key) {
    Partial w{{key_to_letter(key)}, letter_value[key]};
    try_accept(w);
    frontier.push_back(std::move(w));
  }
  for (int len = 2; len <= group.ball_radius; ++len) {
    std::vector<Partial> next;
    next.reserve(frontier.size() * (2 * g - 1));
    for (const Partial& w : frontier) {
      for (int key = 0; key < 2 * g; ++key) {
        const int letter = key_to_letter(key);
        if (letter == -w.letters.back()) continue;
        Partial e{w.letters, w.value * letter_value[key]};
        e.letters.push_back(letter);
        try_accept(e);
        next.push_back(std::move(e));
      }
    }
    frontier = std::move(next);
  }
  return ball;
}

std::vector<ReducedWord> enumerate_reduced_words(const std::vector<GroupSpec>& groups,
                                                 int max_syllables) {
  if (groups.size() < 2) throw RangeError("need at least two factors");
  if (max_syllables < 1) throw RangeError("need max_syllables >= 1");
  std::vector<std::vector<Syllable>> balls(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    balls[i] = factor_ball(groups[i], static_cast<int>(i));
  }

  std::vector<ReducedWord> words;
  std::vector<ReducedWord> layer;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (const Syllable& s : balls[i]) {
      layer.push_back(ReducedWord{{s}});
    }
  }
  words = layer;
  for (int count = 2; count <= max_syllables; ++count) {
    std::vector<ReducedWord> next;
    for (const ReducedWord& w : layer) {
      for (std::size_t i = 0; i < groups.size(); ++i) {
        if (static_cast<int>(i) == w.syllables.back().factor) continue;
        for (const Syllable& s : balls[i]) {
          ReducedWord e = w;
          e.syllables.push_back(s);
          next.push_back(std::move(e));
        }
      }
    }
    words.insert(words.end(), next.begin(), next.end());
    layer = std::move(next);
    if (words.size() > 500000) {
      throw RangeError("word enumeration exceeds 500000 entries");
    }
  }
  return words;
}

PathSample orbit_path(const ReducedWord& word, const std::vector<GroupSpec>& groups,
                      const Point& x) {
  if (word.syllables.empty()) throw RangeError("empty word has no orbit path");
  const int d = x.dim();
  Eigen::LLT<Matrix> llt(x.mat());
  if (llt.info() != Eigen::Success) {
    throw DegenerateElement("basepoint is not positive definite");
  }
  const Matrix base = llt.matrixL();
  const Matrix base_inv = base.inverse();

  // The running prefix keeps its orbit factor in graded SVD form; each
  // letter multiplies on the right by a moderate matrix, so the update is a
  // row-scaled decomposition that stays accurate at any orbit distance.
  AccurateSvd state = accurate_svd(base);
  std::vector<PathKnot> knots;
  knots.reserve(word.syllables.size() + 1);
  knots.push_back({0.0, FactoredPoint::from_point(x)});
  double t = 0.0;
  for (const Syllable& s : word.syllables) {
    if (s.factor < 0 || s.factor >= static_cast<int>(groups.size())) {
      throw RangeError("syllable names a factor outside the family");
    }
    const GroupSpec& group = groups[s.factor];
    for (int letter : s.letters) {
      const int idx = std::abs(letter) - 1;
      if (idx < 0 || idx >= static_cast<int>(group.generators.size())) {
        throw RangeError("letter indexes a missing generator");
      }
      const Matrix gmat = letter > 0 ? group.generators[idx].mat()
                                     : group.generators[idx].inverse().mat();
      const Matrix m = base_inv * (gmat * base);
      const AccurateSvd step = accurate_svd_scaled(state.log_sigma, state.v.transpose() * m);
      state.u = orthonormalize(state.u * step.u);
      state.log_sigma = step.log_sigma;
      state.v = step.v;
    }
    t += static_cast<double>(s.letters.size());
    knots.push_back({t, FactoredPointFactory::from_spectral(state.u, 2.0 * state.log_sigma)});
  }
  return PathSample(std::move(knots));
}

std::vector<FactoredPoint> midpoint_sequence(const PathSample& path) {
  const std::vector<PathKnot>& knots = path.knots();
  const std::size_t n = knots.size();
  std::vector<FactoredPoint> out;
  out.reserve(n);
  out.push_back(knots.front().p);
  for (std::size_t r = 1; r + 1 < n; ++r) {
    out.push_back(midpoint(knots[r - 1].p, knots[r].p));
  }
  out.push_back(knots.back().p);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::certified:
      return "certified";
    case Verdict::refuted:
      return "refuted";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Certificate certify_combination(const std::vector<GroupSpec>& groups, const Point& x,
                                const ThetaSpec& theta, const ThetaSpec& theta_prime,
                                const CertifyTargets& targets, int max_syllables,
                                double id_tol, int pair_budget) {
  if (groups.size() < 2) throw RangeError("need at least two factors");
  const double alpha = theta_gap(theta, theta_prime);
  if (theta.pattern().ambient_dim() != x.dim()) {
    throw PatternMismatch("cone pattern and basepoint dimensions differ");
  }

  Certificate cert;
  cert.constants.alpha = alpha;
  cert.notes.push_back("factor conditions checked on generator-word balls only");
  cert.notes.push_back("word conditions checked up to " + std::to_string(max_syllables) +
                       " syllables");

  std::vector<std::vector<Syllable>> balls(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    balls[i] = factor_ball(groups[i], static_cast<int>(i), id_tol);
    if (balls[i].empty()) {
      cert.verdict = Verdict::refuted;
      cert.notes.push_back("factor " + groups[i].name + " collapses to the identity");
      cert.counterexample = ReducedWord{
          {Syllable{static_cast<int>(i), {1}, groups[i].generators.front()}}};
      return cert;
    }
  }

  const FactoredPoint fx = FactoredPoint::from_point(x);
  double S = std::numeric_limits<double>::infinity();
  double max_disp = 0.0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (const Syllable& s : balls[i]) {
      const double disp = distance(fx, act(s.value, fx));
      if (disp < S) S = disp;
      max_disp = std::max(max_disp, disp);
      if (disp <= 10.0 * id_tol) {
        cert.conditions.S = disp;
        cert.verdict = Verdict::refuted;
        cert.counterexample = ReducedWord{{s}};
        cert.notes.push_back("ball element displaces the basepoint by only " +
                             std::to_string(disp));
        return cert;
      }
    }
  }
  cert.conditions.S = S;

  std::vector<FlagFamily> families;
  families.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::vector<Flag> flags;
    flags.reserve(balls[i].size());
    for (const Syllable& s : balls[i]) {
      const FactoredPoint y = act(s.value, fx);
      bool regular = false;
      try {
        regular = is_theta_regular(fx, y, theta);
        if (regular) flags.push_back(flag_of_segment(fx, y, theta.pattern()));
      } catch (const NotRegular&) {
        regular = false;
      } catch (const DegenerateSegment&) {
        regular = false;
      }
      if (!regular) {
        cert.verdict = Verdict::refuted;
        cert.counterexample = ReducedWord{{s}};
        cert.notes.push_back("generator segment is not regular for the inner cone");
        return cert;
      }
    }
    families.emplace_back(theta.pattern(), std::move(flags));
  }
  cert.conditions.theta_regular = true;

  try {
    const Thickening thick = thicken_flag_family(families);
    cert.conditions.min_margin = thick.min_margin;
    cert.conditions.antipodal_pass = true;
    cert.constants.delta_flag = thick.delta_flag;
    families = thick.families;
  } catch (const NotAntipodal& e) {
    cert.verdict = Verdict::refuted;
    cert.notes.push_back(std::string("cross-family transversality fails: ") + e.what());
    return cert;
  }

  double D = 0.0;
  for (std::size_t i = 0; i < families.size(); ++i) {
    for (std::size_t j = i + 1; j < families.size(); ++j) {
      D = std::max(D, compute_D(families[i], families[j], x));
    }
  }
  cert.constants.D = D;
  cert.constants.R1 = bound_R1(D, alpha);
  cert.constants.spacing = midpoint_spacing_bound(S, D, alpha);
  cert.conditions.displacement_pass =
      S >= 2.0 * cert.constants.R1 && cert.constants.spacing > 0.0;

  const double eps_target = targets.eps_max > 0 ? targets.eps_max : M_PI / 6.0;
  const double l_target =
      std::max(targets.l_min > 0 ? targets.l_min : 0.0, cert.constants.spacing - 1e-6);
  cert.constants.L_req = std::max(1.0, max_disp);
  cert.constants.A_req = 4.0 * D + 1.0;
  cert.constants.D_req = targets.D_max > 0 ? targets.D_max : 2.0 * D + 1.0;

  const std::vector<ReducedWord> words = enumerate_reduced_words(groups, max_syllables);
  double eps_meas = 0.0;
  double l_meas = std::numeric_limits<double>::infinity();
  bool straight_ok = true;
  bool morse_ok = true;
  std::optional<ReducedWord> soft_witness;
  const Matrix id = Matrix::Identity(x.dim(), x.dim());
  for (const ReducedWord& word : words) {
    const GroupElement value = word.value(x.dim());
    if (word.syllables.size() >= 2 && (value.mat() - id).norm() <= id_tol) {
      cert.verdict = Verdict::refuted;
      cert.counterexample = word;
      cert.notes.push_back("reduced word evaluates to the identity");
      return cert;
    }
    const PathSample path = orbit_path(word, groups, x);
    const std::vector<FactoredPoint> mids = midpoint_sequence(path);
    const StraightSpacedCheck ss = check_straight_spaced(mids, theta_prime);
    eps_meas = std::max(eps_meas, ss.eps);
    l_meas = std::min(l_meas, ss.l);
    if (!ss.regular || ss.eps > eps_target || ss.l < l_target) {
      straight_ok = false;
      if (!soft_witness) soft_witness = word;
    }
    const MorseVerdict mv = check_morse(path, cert.constants.L_req, cert.constants.A_req,
                                        theta_prime, cert.constants.D_req, pair_budget);
    cert.conditions.D_measured = std::max(cert.conditions.D_measured, mv.D_measured);
    cert.conditions.L_fit = std::max(cert.conditions.L_fit, mv.L_fit);
    cert.conditions.A_fit = std::max(cert.conditions.A_fit, mv.A_fit);
    if (!mv.pass) {
      morse_ok = false;
      if (!soft_witness) soft_witness = word;
    }
  }
  cert.conditions.eps_measured = eps_meas;
  cert.conditions.l_measured = l_meas;
  cert.conditions.straightness_pass = straight_ok;
  cert.conditions.morse_pass = morse_ok;

  const bool all_pass = cert.conditions.displacement_pass && cert.conditions.theta_regular &&
                        cert.conditions.antipodal_pass && cert.conditions.straightness_pass &&
                        cert.conditions.morse_pass;
  if (all_pass) {
    cert.verdict = Verdict::certified;
  } else {
    cert.verdict = Verdict::inconclusive;
    cert.counterexample = soft_witness;
  }
  return cert;
}

FreenessReport verify_freeness_ball(const std::vector<GroupSpec>& groups, const Point& x,
                                    int max_syllables, double id_tol) {
  const std::vector<ReducedWord> words = enumerate_reduced_words(groups, max_syllables);
  FreenessReport report;
  report.free_up_to = max_syllables;
  const Matrix id = Matrix::Identity(x.dim(), x.dim());
  const FactoredPoint fx = FactoredPoint::from_point(x);
  double num = 0.0;
  double den = 0.0;
  std::vector<std::pair<double, double>> samples;
  samples.reserve(words.size());
  for (const ReducedWord& word : words) {
    const GroupElement value = word.value(x.dim());
    if ((value.mat() - id).norm() <= id_tol) {
      report.counterexample = word;
      report.free_up_to =
          std::min(report.free_up_to, static_cast<int>(word.syllables.size()) - 1);
      continue;
    }
    const double len = word.letter_length();
    const PathSample path = orbit_path(word, groups, x);
    const double disp = distance(fx, path.knots().back().p);
    samples.emplace_back(len, disp);
    num += len * disp;
    den += len * len;
  }
  report.growth = den > 0 ? num / den : 0.0;
  for (const auto& [len, disp] : samples) {
    report.offset = std::max(report.offset, report.growth * len - disp);
  }
  report.pass = !report.counterexample.has_value() && report.growth > 0;
  return report;
}

std::vector<GroupSpec> schottky_powers(const std::vector<GroupElement>& elements, int power,
                                       const FacePattern& pattern, double gap_tol) {
  if (elements.empty()) throw RangeError("no elements given");
  if (power < 1) throw RangeError("power must be at least 1");
  std::vector<GroupSpec> out;
  out.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const GroupElement& g = elements[i];
    if (g.dim() != pattern.ambient_dim()) {
      throw PatternMismatch("element dimension disagrees with pattern");
    }
    Eigen::EigenSolver<Matrix> solver(g.mat());
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("eigensolve of group element failed");
    }
    Vector moduli = solver.eigenvalues().cwiseAbs();
    std::sort(moduli.data(), moduli.data() + moduli.size(), std::greater<double>());
    for (int k : pattern.dims()) {
      const double gap = power * (std::log(moduli(k - 1)) - std::log(moduli(k)));
      if (!(gap > gap_tol)) {
        throw NotProximal(static_cast<int>(i),
                          "powered modulus gap " + std::to_string(gap) + " at dimension " +
                              std::to_string(k));
      }
    }
    Matrix p = Matrix::Identity(g.dim(), g.dim());
    for (int k = 0; k < power; ++k) p = p * g.mat();
    GroupSpec spec;
    spec.name = "g" + std::to_string(i + 1) + "^" + std::to_string(power);
    spec.generators.push_back(GroupElement::from_matrix(p));
    spec.ball_radius = 1;
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace anosov
