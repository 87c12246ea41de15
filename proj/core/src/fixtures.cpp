#include "gcomp/fixtures.hpp"

#include <initializer_list>
#include <map>
#include <string>

#include "gcomp/errors.hpp"

namespace gcomp {

namespace {

// Rows as printed; columns are the vectors.
const Matrix kXPlus(5, 10,
                    {-0.7998, 0.1004,  -0.7599, 0.6616,  0.5864,  -0.4010, -0.0148, -0.8320, 0.3187,  -0.4861,
                     0.1760,  0.0704,  0.1056,  -0.1369, -0.6259, -0.5289, -0.3740, 0.3140,  0.6299,  -0.5494,
                     0.0806,  -0.9085, -0.3381, -0.1970, -0.1438, 0.4863,  0.5832,  0.0840,  -0.2299, -0.2647,
                     0.5487,  -0.3120, -0.5447, 0.5673,  0.4870,  -0.5239, 0.0407,  -0.2955, 0.3913,  0.5113,
                     -0.1476, 0.2497,  -0.0208, 0.4276,  0.0808,  -0.2202, -0.7198, 0.3389,  0.5438,  -0.3611});

const Matrix kXMinus(5, 10,
                     {-0.3624, -0.9364, 1.1566,  -0.8076, -1.1066, 1.3148,  -0.3405, -0.7938, -3.0744, 0.2493,
                      -0.6616, -1.4250, -1.4638, -0.1997, 0.1102,  0.9261,  1.2240,  -0.1874, -0.4569, -0.1518,
                      -0.4980, -0.0708, -0.7947, -1.3493, 0.3226,  -0.4982, 1.0334,  -0.2817, 0.3247,  -2.4773,
                      -1.4281, -0.7722, 0.9885,  -0.4056, -0.2903, -0.1814, 1.4318,  1.0533,  1.3286,  -0.6086,
                      -0.7196, 1.3075,  1.0363,  -0.9904, 0.4357,  -1.6953, 0.2346,  -0.5735, -1.0376, 0.1766});

struct Tolerances {
  double derivative;
  double value;
  double adjusted = 0.02;
};

using C = Column;

// Adds rows t = 0.1, ..., 0.9. Each entry lists the values of `columns`.
void fill(ReferenceTable& table, std::initializer_list<Column> columns, Tolerances tol,
          std::initializer_list<std::initializer_list<double>> rows) {
  int k = 1;
  for (const auto& row : rows) {
    ReferenceRow r;
    r.t = k++ / 10.0;
    auto it = row.begin();
    for (Column c : columns) {
      double tolerance = tol.value;
      if (c == C::DpsiStandard || c == C::DpsiComputed) tolerance = tol.derivative;
      if (c == C::AdjIntStandard || c == C::AdjIntComputed || c == C::AdjDirect || c == C::AdjLimit) {
        tolerance = tol.adjusted;
      }
      r.cells.push_back({c, *it++, tolerance});
    }
    table.rows.push_back(std::move(r));
  }
}

const std::initializer_list<Column> kPlain = {C::DpsiStandard, C::DpsiComputed, C::PsiIntStandard, C::PsiIntComputed,
                                              C::PsiDirect};
const std::initializer_list<Column> kWithLimit = {C::DpsiStandard,   C::DpsiComputed, C::PsiIntStandard,
                                                  C::PsiIntComputed, C::PsiDirect,    C::Limit};
const std::initializer_list<Column> kLifted = {C::DpsiStandard, C::DpsiComputed,   C::PsiIntStandard,
                                               C::AdjIntStandard, C::PsiIntComputed, C::AdjIntComputed,
                                               C::PsiDirect,    C::AdjDirect};
const std::initializer_list<Column> kLiftedLimit = {C::DpsiStandard,   C::DpsiComputed,   C::PsiIntStandard,
                                                    C::AdjIntStandard, C::PsiIntComputed, C::AdjIntComputed,
                                                    C::PsiDirect,      C::AdjDirect,      C::Limit,
                                                    C::AdjLimit};

ReferenceTable base(std::string id, std::string caption, std::string set, Variant v, double beta, int s,
                    std::size_t samples) {
  ReferenceTable t;
  t.id = std::move(id);
  t.caption = std::move(caption);
  t.set = std::move(set);
  t.variant = v;
  t.beta = beta;
  t.s = s;
  t.samples = samples;
  return t;
}

std::map<std::string, ReferenceTable, std::less<>> build_tables() {
  std::map<std::string, ReferenceTable, std::less<>> out;
  const Tolerances unit3{0.05, 0.02};
  const Tolerances unit10{0.06, 0.02};
  const Tolerances general{0.06, 0.03};
  const Tolerances lifted3{0.05, 0.03};
  const Tolerances lifted10{0.06, 0.03};

  {
    auto t = base("table1", "x_plus, spherical, beta=3, s=+1", "x_plus", Variant::Spherical, 3, 1, 30000);
    fill(t, kPlain, unit3,
         {{-0.0411, -0.0331, 1.6762, 1.6763, 1.6787},
          {-0.0651, -0.0635, 1.6711, 1.6712, 1.6733},
          {-0.0932, -0.0937, 1.6630, 1.6631, 1.6640},
          {-0.1251, -0.1258, 1.6516, 1.6518, 1.6551},
          {-0.1610, -0.1613, 1.6371, 1.6371, 1.6395},
          {-0.2041, -0.2005, 1.6186, 1.6187, 1.6232},
          {-0.2541, -0.2528, 1.5954, 1.5956, 1.5986},
          {-0.3185, -0.3219, 1.5661, 1.5665, 1.5711},
          {-0.4287, -0.4277, 1.5279, 1.5285, 1.5336}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table2", "x_plus, spherical, beta=3, s=-1", "x_plus", Variant::Spherical, 3, -1, 30000);
    fill(t, kPlain, unit3,
         {{-0.0363, -0.0344, -0.2266, -0.2267, -0.2224},
          {-0.0655, -0.0680, -0.2320, -0.2321, -0.2320},
          {-0.0998, -0.1010, -0.2408, -0.2409, -0.2391},
          {-0.1333, -0.1377, -0.2530, -0.2532, -0.2525},
          {-0.1737, -0.1751, -0.2690, -0.2692, -0.2676},
          {-0.2208, -0.2189, -0.2892, -0.2893, -0.2854},
          {-0.2768, -0.2716, -0.3142, -0.3143, -0.3106},
          {-0.3431, -0.3348, -0.3452, -0.3452, -0.3399},
          {-0.4270, -0.4283, -0.3839, -0.3840, -0.3798}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table3", "x_plus, spherical, beta=10, s=+1, with large-beta limit", "x_plus",
                  Variant::Spherical, 10, 1, 30000);
    t.has_limit = true;
    fill(t, kWithLimit, unit10,
         {{-0.0334, -0.0332, 1.5942, 1.5940, 1.5951, 1.5866},
          {-0.0616, -0.0648, 1.5891, 1.5888, 1.5904, 1.5819},
          {-0.0953, -0.0960, 1.5808, 1.5805, 1.5814, 1.5729},
          {-0.1293, -0.1296, 1.5693, 1.5688, 1.5727, 1.5642},
          {-0.1666, -0.1692, 1.5540, 1.5536, 1.5565, 1.5481},
          {-0.2115, -0.2144, 1.5345, 1.5341, 1.5356, 1.5271},
          {-0.2733, -0.2716, 1.5097, 1.5093, 1.5144, 1.5058},
          {-0.3604, -0.3558, 1.4775, 1.4774, 1.4820, 1.4732},
          {-0.5081, -0.5016, 1.4335, 1.4336, 1.4388, 1.4296}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table4", "x_plus, spherical, beta=10, s=-1, with large-beta limit", "x_plus",
                  Variant::Spherical, 10, -1, 30000);
    t.has_limit = true;
    fill(t, kWithLimit, unit10,
         {{-0.0398, -0.0349, -0.3040, -0.3038, -0.3080, -0.3167},
          {-0.0670, -0.0693, -0.3094, -0.3093, -0.3122, -0.3209},
          {-0.1047, -0.1059, -0.3185, -0.3184, -0.3195, -0.3280},
          {-0.1411, -0.1444, -0.3313, -0.3312, -0.3320, -0.3405},
          {-0.1866, -0.1848, -0.3481, -0.3481, -0.3500, -0.3585},
          {-0.2382, -0.2366, -0.3698, -0.3697, -0.3695, -0.3780},
          {-0.2995, -0.2996, -0.3969, -0.3969, -0.3978, -0.4066},
          {-0.3780, -0.3806, -0.4314, -0.4314, -0.4292, -0.4381},
          {-0.5042, -0.5164, -0.4767, -0.4770, -0.4762, -0.4858}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table5", "x_minus, general, beta=3, s=+1", "x_minus", Variant::General, 3, 1, 50000);
    fill(t, kPlain, general,
         {{-0.0868, -0.0877, 4.2365, 4.2376, 4.2299},
          {-0.1643, -0.1662, 4.2229, 4.2241, 4.2189},
          {-0.2493, -0.2342, 4.2012, 4.2032, 4.2180},
          {-0.3099, -0.3181, 4.1721, 4.1746, 4.1691},
          {-0.3966, -0.3936, 4.1357, 4.1382, 4.1502},
          {-0.4833, -0.4948, 4.0903, 4.0926, 4.0912},
          {-0.6006, -0.5995, 4.0343, 4.0372, 4.0402},
          {-0.7336, -0.7447, 3.9664, 3.9691, 3.9636},
          {-0.9417, -0.9298, 3.8811, 3.8846, 3.8858}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table6", "x_minus, general, beta=3, s=-1", "x_minus", Variant::General, 3, -1, 50000);
    fill(t, kPlain, general,
         {{-0.0672, -0.0643, -0.5143, -0.5130, -0.5128},
          {-0.1284, -0.1278, -0.5252, -0.5234, -0.5245},
          {-0.1919, -0.1926, -0.5414, -0.5401, -0.5413},
          {-0.2546, -0.2550, -0.5641, -0.5630, -0.5630},
          {-0.3169, -0.3186, -0.5934, -0.5923, -0.5929},
          {-0.3850, -0.3855, -0.6291, -0.6281, -0.6342},
          {-0.4623, -0.4621, -0.6721, -0.6713, -0.6671},
          {-0.5355, -0.5447, -0.7232, -0.7223, -0.7214},
          {-0.6412, -0.6439, -0.7829, -0.7827, -0.7809}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("general_beta10_splus", "x_minus, general, beta=10, s=+1, with large-beta limit", "x_minus",
                  Variant::General, 10, 1, 50000);
    t.has_limit = true;
    fill(t, kWithLimit, general,
         {{-0.0863, -0.0895, 4.2267, 4.2270, 4.2196, 4.2180},
          {-0.1582, -0.1670, 4.2137, 4.2135, 4.2021, 4.2005},
          {-0.2516, -0.2393, 4.1922, 4.1926, 4.1807, 4.1791},
          {-0.3230, -0.3247, 4.1625, 4.1636, 4.1611, 4.1594},
          {-0.4159, -0.4012, 4.1252, 4.1266, 4.1094, 4.1078},
          {-0.4946, -0.4907, 4.0795, 4.0814, 4.0740, 4.0723},
          {-0.6124, -0.6059, 4.0230, 4.0255, 4.0264, 4.0247},
          {-0.7450, -0.7344, 3.9542, 3.9574, 3.9625, 3.9608},
          {-0.9485, -0.9422, 3.8678, 3.8715, 3.8699, 3.8680}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("general_beta10_sminus", "x_minus, general, beta=10, s=-1, with large-beta limit", "x_minus",
                  Variant::General, 10, -1, 50000);
    t.has_limit = true;
    fill(t, kWithLimit, general,
         {{-0.0785, -0.0670, -0.5548, -0.5544, -0.5504, -0.5537},
          {-0.1263, -0.1309, -0.5657, -0.5649, -0.5604, -0.5638},
          {-0.1932, -0.1929, -0.5827, -0.5819, -0.5815, -0.5849},
          {-0.2583, -0.2599, -0.6060, -0.6052, -0.5950, -0.5984},
          {-0.3379, -0.3304, -0.6358, -0.6351, -0.6330, -0.6364},
          {-0.3975, -0.3955, -0.6727, -0.6716, -0.6615, -0.6650},
          {-0.4738, -0.4685, -0.7170, -0.7158, -0.7123, -0.7159},
          {-0.5622, -0.5668, -0.7699, -0.7682, -0.7549, -0.7587},
          {-0.6710, -0.6696, -0.8320, -0.8300, -0.8205, -0.8244}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table7", "x_plus, lifted, beta=3, c3=0.1, s=+1", "x_plus", Variant::Lifted, 3, 1, 50000);
    t.c3 = 0.1;
    fill(t, kLifted, lifted3,
         {{-0.0549, -0.0525, 3.1908, 1.6626, 3.1918, 1.6630, 3.1846, 1.6597},
          {-0.1054, -0.1022, 3.1827, 1.6588, 3.1836, 1.6592, 3.1832, 1.6590},
          {-0.1523, -0.1541, 3.1693, 1.6525, 3.1703, 1.6529, 3.1674, 1.6516},
          {-0.1999, -0.2093, 3.1506, 1.6436, 3.1516, 1.6441, 3.1546, 1.6455},
          {-0.2761, -0.2712, 3.1256, 1.6318, 3.1270, 1.6325, 3.1279, 1.6329},
          {-0.3448, -0.3408, 3.0944, 1.6168, 3.0956, 1.6174, 3.1024, 1.6207},
          {-0.4328, -0.4311, 3.0551, 1.5978, 3.0560, 1.5982, 3.0555, 1.5980},
          {-0.5582, -0.5535, 3.0051, 1.5731, 3.0057, 1.5735, 3.0138, 1.5775},
          {-0.7420, -0.7393, 2.9392, 1.5401, 2.9401, 1.5405, 2.9482, 1.5447}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("table8", "x_plus, lifted, beta=3, c3=0.1, s=-1", "x_plus", Variant::Lifted, 3, -1, 50000);
    t.c3 = 0.1;
    fill(t, kLifted, lifted3,
         {{-0.0273, -0.0190, 0.8898, -0.2411, 0.8902, -0.2405, 0.8875, -0.2450},
          {-0.0378, -0.0367, 0.8868, -0.2462, 0.8872, -0.2455, 0.8878, -0.2445},
          {-0.0563, -0.0541, 0.8821, -0.2541, 0.8825, -0.2534, 0.8834, -0.2519},
          {-0.0693, -0.0715, 0.8757, -0.2649, 0.8761, -0.2642, 0.8788, -0.2596},
          {-0.0900, -0.0899, 0.8675, -0.2790, 0.8679, -0.2783, 0.8700, -0.2747},
          {-0.1095, -0.1105, 0.8573, -0.2966, 0.8577, -0.2959, 0.8572, -0.2968},
          {-0.1347, -0.1337, 0.8448, -0.3185, 0.8453, -0.3175, 0.8467, -0.3152},
          {-0.1680, -0.1637, 0.8295, -0.3457, 0.8302, -0.3445, 0.8308, -0.3434},
          {-0.2064, -0.2066, 0.8107, -0.3800, 0.8114, -0.3786, 0.8146, -0.3727}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("lifted_beta10_splus", "x_plus, lifted, beta=10, c3=0.03, s=+1, with large-beta limit", "x_plus",
                  Variant::Lifted, 10, 1, 50000);
    t.c3 = 0.03;
    t.has_limit = true;
    t.limit_c3s = 0.3;
    fill(t, kLiftedLimit, lifted10,
         {{-0.0479, -0.0518, 3.0304, 1.5857, 3.0304, 1.5857, 3.0204, 1.5808, 3.0047, 1.5730},
          {-0.1145, -0.0993, 3.0224, 1.5817, 3.0223, 1.5817, 3.0251, 1.5831, 3.0093, 1.5753},
          {-0.1411, -0.1547, 3.0095, 1.5754, 3.0091, 1.5751, 3.0177, 1.5794, 3.0019, 1.5716},
          {-0.2146, -0.2079, 2.9906, 1.5660, 2.9905, 1.5659, 2.9962, 1.5687, 2.9808, 1.5611},
          {-0.2839, -0.2748, 2.9658, 1.5535, 2.9658, 1.5535, 2.9644, 1.5528, 2.9491, 1.5451},
          {-0.3462, -0.3522, 2.9339, 1.5374, 2.9335, 1.5372, 2.9345, 1.5377, 2.9192, 1.5299},
          {-0.4512, -0.4511, 2.8926, 1.5163, 2.8924, 1.5162, 2.8976, 1.5188, 2.8824, 1.5110},
          {-0.5984, -0.5980, 2.8395, 1.4886, 2.8387, 1.4882, 2.8475, 1.4928, 2.8320, 1.4847},
          {-0.8504, -0.8428, 2.7661, 1.4496, 2.7654, 1.4492, 2.7775, 1.4557, 2.7615, 1.4472}});
    out.emplace(t.id, std::move(t));
  }
  {
    auto t = base("lifted_beta10_sminus", "x_plus, lifted, beta=10, c3=0.1, s=-1, with large-beta limit", "x_plus",
                  Variant::Lifted, 10, -1, 50000);
    t.c3 = 0.1;
    t.has_limit = true;
    t.limit_c3s = 1.0;
    fill(t, kLiftedLimit, lifted10,
         {{-0.0575, -0.0480, 0.7528, -0.3506, 0.7523, -0.3509, 0.7627, -0.3448, 0.7524, -0.3508},
          {-0.0746, -0.0866, 0.7457, -0.3548, 0.7453, -0.3551, 0.7551, -0.3492, 0.7449, -0.3553},
          {-0.1312, -0.1244, 0.7353, -0.3611, 0.7344, -0.3616, 0.7416, -0.3573, 0.7315, -0.3634},
          {-0.1393, -0.1596, 0.7216, -0.3695, 0.7200, -0.3705, 0.7270, -0.3662, 0.7171, -0.3723},
          {-0.1963, -0.2010, 0.7032, -0.3810, 0.7016, -0.3821, 0.7092, -0.3773, 0.6991, -0.3837},
          {-0.2478, -0.2464, 0.6808, -0.3956, 0.6789, -0.3968, 0.6867, -0.3917, 0.6767, -0.3982},
          {-0.2937, -0.3015, 0.6535, -0.4139, 0.6511, -0.4155, 0.6649, -0.4061, 0.6549, -0.4129},
          {-0.3713, -0.3731, 0.6192, -0.4380, 0.6170, -0.4396, 0.6316, -0.4291, 0.6215, -0.4363},
          {-0.4972, -0.4954, 0.5751, -0.4710, 0.5728, -0.4728, 0.5894, -0.4600, 0.5789, -0.4680}});
    out.emplace(t.id, std::move(t));
  }
  return out;
}

const std::map<std::string, ReferenceTable, std::less<>>& tables() {
  static const auto t = build_tables();
  return t;
}

}  // namespace

Matrix fixture_raw(std::string_view name) {
  if (name == "x_plus") return kXPlus;
  if (name == "x_minus") return kXMinus;
  throw ValidationError("unknown fixture '" + std::string(name) + "' (expected x_plus or x_minus)");
}

VectorSet fixture(std::string_view name) {
  const Matrix raw = fixture_raw(name);
  return build_set(name == "x_plus" ? normalize_columns(raw) : raw);
}

std::vector<std::string> fixture_names() { return {"x_plus", "x_minus"}; }

std::string_view to_string(Column c) {
  switch (c) {
    case C::DpsiStandard: return "dpsi_standard";
    case C::DpsiComputed: return "dpsi_computed";
    case C::PsiIntStandard: return "psi_int_standard";
    case C::PsiIntComputed: return "psi_int_computed";
    case C::PsiDirect: return "psi_direct";
    case C::Limit: return "limit";
    case C::AdjIntStandard: return "adjusted_int_standard";
    case C::AdjIntComputed: return "adjusted_int_computed";
    case C::AdjDirect: return "adjusted_direct";
    case C::AdjLimit: return "adjusted_limit";
  }
  return "?";
}

const ReferenceTable& reference(std::string_view id) {
  const auto& t = tables();
  const auto it = t.find(id);
  if (it == t.end()) throw ValidationError("unknown reference table '" + std::string(id) + "'");
  return it->second;
}

std::vector<std::string> reference_ids() {
  // Numbered tables first, then the extra ones.
  return {"table1", "table2", "table3", "table4", "table5", "table6", "table7", "table8",
          "general_beta10_splus", "general_beta10_sminus", "lifted_beta10_splus", "lifted_beta10_sminus"};
}

}  // namespace gcomp
