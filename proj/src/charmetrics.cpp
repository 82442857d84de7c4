#include "miner/charmetrics.hpp"

#include <algorithm>
#include <map>

#include "miner/error.hpp"
#include "miner/parallel.hpp"

namespace miner {

double Ratio::value() const {
  if (!defined()) throw UndefinedResult("ratio with zero denominator");
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> Ratio::to_optional() const {
  if (!defined()) return std::nullopt;
  return value();
}

bool same_value(const Ratio& a, const Ratio& b) noexcept {
  if (!a.defined() || !b.defined()) return a.defined() == b.defined();
  return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
}

std::vector<UserPosts> user_posts(const Dataset& d, const Taxonomy& taxonomy) {
  std::map<std::string, UserPosts> by_user;
  for (const auto& user : d.users()) by_user[user].user_id = user;
  for (const auto& m : d.moments()) {
    PostedMoment moment;
    moment.reserve(m.image_ids.size());
    for (const auto& id : m.image_ids) {
      const ImageRecord* img = d.find_image(id);
      if (img == nullptr) throw PreconditionError("moment " + m.moment_id + " references missing image " + id);
      if (!img->category) throw PreconditionError("image " + id + " is not categorized");
      if (!taxonomy.contains(*img->category)) {
        throw PreconditionError("image " + id + " has category '" + *img->category + "' outside the taxonomy");
      }
      PostedImage posted;
      posted.category = *img->category;
      if (taxonomy.is_selfie(posted.category)) {
        if (img->subcategory) {
          posted.subcategory = taxonomy.selfie_kind(*img->subcategory);
          if (!posted.subcategory) {
            throw PreconditionError("image " + id + " has unknown selfie subcategory '" + *img->subcategory + "'");
          }
        }
        posted.face = face_tag(img->face_count);
      }
      moment.push_back(std::move(posted));
    }
    by_user[m.user_id].moments.push_back(std::move(moment));
  }
  std::vector<UserPosts> out;
  out.reserve(by_user.size());
  for (auto& [id, posts] : by_user) out.push_back(std::move(posts));
  return out;
}

std::set<std::string> occurrences(const PostedMoment& moment) {
  std::set<std::string> present;
  for (const auto& img : moment) present.insert(img.category);
  return present;
}

std::map<std::string, std::int64_t> occurrence_counts(const UserPosts& user) {
  std::map<std::string, std::int64_t> counts;
  for (const auto& m : user.moments) {
    for (const auto& c : occurrences(m)) ++counts[c];
  }
  return counts;
}

std::vector<Ratio> category_frequency(const UserPosts& user, const Taxonomy& taxonomy, bool include_selfie) {
  const auto counts = occurrence_counts(user);
  std::int64_t total = 0;
  for (const auto& [c, n] : counts) {
    if (include_selfie || !taxonomy.is_selfie(c)) total += n;
  }
  if (total == 0) throw UndefinedResult("user " + user.user_id + " has no category occurrences");
  std::vector<Ratio> freq;
  freq.reserve(taxonomy.size() + 1);
  auto count_of = [&](const std::string& c) {
    const auto it = counts.find(c);
    return it == counts.end() ? std::int64_t{0} : it->second;
  };
  for (const auto& c : taxonomy.categories) freq.push_back({count_of(c), total});
  if (include_selfie) freq.push_back({count_of(taxonomy.selfie), total});
  return freq;
}

Ratio category_inertia(const UserPosts& user, std::string_view category) {
  std::int64_t images = 0;
  std::int64_t occurrences_of = 0;
  for (const auto& m : user.moments) {
    const auto n = std::count_if(m.begin(), m.end(), [&](const PostedImage& img) { return img.category == category; });
    images += n;
    occurrences_of += n > 0 ? 1 : 0;
  }
  if (occurrences_of == 0) {
    throw UndefinedResult("inertia of '" + std::string(category) + "' is undefined for user " + user.user_id);
  }
  return {images, occurrences_of};
}

Ratio category_singleness(const UserPosts& user, std::string_view category) {
  std::int64_t alone = 0;
  std::int64_t with = 0;
  for (const auto& m : user.moments) {
    const bool has = std::any_of(m.begin(), m.end(), [&](const PostedImage& img) { return img.category == category; });
    if (!has) continue;
    ++with;
    if (std::all_of(m.begin(), m.end(), [&](const PostedImage& img) { return img.category == category; })) ++alone;
  }
  if (with == 0) {
    throw UndefinedResult("singleness of '" + std::string(category) + "' is undefined for user " + user.user_id);
  }
  return {alone, with};
}

FFeature f_feature(const UserPosts& user, const Taxonomy& taxonomy) {
  FFeature f;
  try {
    f.freq = category_frequency(user, taxonomy, /*include_selfie=*/false);
  } catch (const UndefinedResult&) {
    f.sparse = true;
    f.freq.assign(taxonomy.size(), Ratio{0, 1});
  }
  return f;
}

Ratio i_feature(const UserPosts& user, const Taxonomy& taxonomy) {
  std::int64_t images = 0;
  std::int64_t occ = 0;
  for (const auto& m : user.moments) {
    std::set<std::string_view> present;
    for (const auto& img : m) {
      if (taxonomy.is_selfie(img.category)) continue;
      ++images;
      present.insert(img.category);
    }
    occ += static_cast<std::int64_t>(present.size());
  }
  if (occ == 0) throw UndefinedResult("I-feature is undefined for user " + user.user_id + " (no non-selfie images)");
  return {images, occ};
}

Ratio s_feature(const UserPosts& user, const Taxonomy& taxonomy) {
  std::int64_t single = 0;
  std::int64_t kept = 0;
  for (const auto& m : user.moments) {
    const auto present = occurrences(m);
    if (present.count(taxonomy.selfie) > 0) continue;
    ++kept;
    if (present.size() == 1) ++single;
  }
  if (kept == 0) throw UndefinedResult("S-feature is undefined for user " + user.user_id + " (no selfie-free moments)");
  return {single, kept};
}

const char* to_string(SelfieMeasure measure) noexcept {
  switch (measure) {
    case SelfieMeasure::Frequency: return "selfie_frequency";
    case SelfieMeasure::Inertia: return "selfie_inertia";
    case SelfieMeasure::Singleness: return "selfie_singleness";
    case SelfieMeasure::GroupTendency: return "group_tendency";
    case SelfieMeasure::OutdoorTendency: return "outdoor_tendency";
    case SelfieMeasure::HoldingTendency: return "holding_tendency";
    case SelfieMeasure::FaceMaskTendency: return "facemask_tendency";
  }
  return "";
}

std::optional<SelfieMeasure> selfie_measure_from_string(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kSelfieMeasures; ++i) {
    const auto m = static_cast<SelfieMeasure>(i);
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

SelfieMeasures selfie_measures(const UserPosts& user, const Taxonomy& taxonomy) {
  SelfieCounts c;
  for (const auto& m : user.moments) {
    const auto present = occurrences(m);
    c.all_occurrences += static_cast<std::int64_t>(present.size());
    if (present.count(taxonomy.selfie) == 0) continue;
    ++c.occurrences;
    if (present.size() == 1) ++c.alone;
    std::array<bool, kSelfieKinds> kinds{};
    bool one = false;
    bool multi = false;
    for (const auto& img : m) {
      if (!taxonomy.is_selfie(img.category)) continue;
      ++c.images;
      if (img.subcategory) kinds[static_cast<std::size_t>(*img.subcategory)] = true;
      one = one || img.face == FaceTag::OneFace;
      multi = multi || img.face == FaceTag::MultiFace;
    }
    for (std::size_t k = 0; k < kSelfieKinds; ++k) c.subcategory[k] += kinds[k] ? 1 : 0;
    c.one_face += one ? 1 : 0;
    c.multi_face += multi ? 1 : 0;
  }

  const auto indoor = c.subcategory[static_cast<std::size_t>(SelfieKind::Indoor)];
  auto versus_indoor = [&](SelfieKind kind) {
    const auto n = c.subcategory[static_cast<std::size_t>(kind)];
    return Ratio{n, n + indoor};
  };
  SelfieMeasures out;
  out.counts = c;
  out.values[static_cast<std::size_t>(SelfieMeasure::Frequency)] = {c.occurrences, c.all_occurrences};
  out.values[static_cast<std::size_t>(SelfieMeasure::Inertia)] = {c.images, c.occurrences};
  out.values[static_cast<std::size_t>(SelfieMeasure::Singleness)] = {c.alone, c.occurrences};
  out.values[static_cast<std::size_t>(SelfieMeasure::GroupTendency)] = {c.multi_face, c.one_face + c.multi_face};
  out.values[static_cast<std::size_t>(SelfieMeasure::OutdoorTendency)] = versus_indoor(SelfieKind::Outdoor);
  out.values[static_cast<std::size_t>(SelfieMeasure::HoldingTendency)] = versus_indoor(SelfieKind::Holding);
  out.values[static_cast<std::size_t>(SelfieMeasure::FaceMaskTendency)] = versus_indoor(SelfieKind::FaceMask);
  return out;
}

ExactProfile exact_profile(const UserPosts& user, const Taxonomy& taxonomy) {
  ExactProfile p;
  p.user_id = user.user_id;
  p.f = f_feature(user, taxonomy);
  try {
    p.inertia = i_feature(user, taxonomy);
  } catch (const UndefinedResult&) {
  }
  try {
    p.singleness = s_feature(user, taxonomy);
  } catch (const UndefinedResult&) {
  }
  p.selfie = selfie_measures(user, taxonomy);
  return p;
}

Eigen::VectorXd UserProfile::full_frequency() const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(freq.size() + 1);
  if (total_occurrences == 0) return full;
  const double share = static_cast<double>(total_occurrences - selfie_occurrences) / static_cast<double>(total_occurrences);
  full.head(freq.size()) = freq * share;
  full(freq.size()) = static_cast<double>(selfie_occurrences) / static_cast<double>(total_occurrences);
  return full;
}

bool UserProfile::operator==(const UserProfile& other) const {
  return user_id == other.user_id && freq.size() == other.freq.size() && (freq.array() == other.freq.array()).all() &&
         sparse == other.sparse && inertia == other.inertia && singleness == other.singleness &&
         selfie == other.selfie && total_occurrences == other.total_occurrences &&
         selfie_occurrences == other.selfie_occurrences && subcategory_occurrences == other.subcategory_occurrences &&
         one_face_occurrences == other.one_face_occurrences && multi_face_occurrences == other.multi_face_occurrences;
}

UserProfile to_profile(const ExactProfile& exact) {
  UserProfile p;
  p.user_id = exact.user_id;
  p.freq.resize(static_cast<Eigen::Index>(exact.f.freq.size()));
  for (std::size_t i = 0; i < exact.f.freq.size(); ++i) {
    p.freq(static_cast<Eigen::Index>(i)) = exact.f.freq[i].value();
  }
  p.sparse = exact.f.sparse;
  p.inertia = exact.inertia.to_optional();
  p.singleness = exact.singleness.to_optional();
  for (std::size_t i = 0; i < kSelfieMeasures; ++i) p.selfie[i] = exact.selfie.values[i].to_optional();
  const auto& c = exact.selfie.counts;
  p.total_occurrences = c.all_occurrences;
  p.selfie_occurrences = c.occurrences;
  p.subcategory_occurrences = c.subcategory;
  p.one_face_occurrences = c.one_face;
  p.multi_face_occurrences = c.multi_face;
  return p;
}

std::vector<UserProfile> characterize(const Dataset& d, const Taxonomy& taxonomy) {
  const auto posts = user_posts(d, taxonomy);
  std::vector<UserProfile> profiles(posts.size());
  parallel_for(posts.size(), [&](std::size_t i) { profiles[i] = to_profile(exact_profile(posts[i], taxonomy)); });
  return profiles;
}

}  // namespace miner
