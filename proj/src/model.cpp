#include "collab/model.hpp"

#include <cmath>
#include <stdexcept>

namespace collab {

namespace {

constexpr std::array<std::string_view, 4> kLabels = {
    "Low income", "Lower middle income", "Upper middle income", "High income"};

}  // namespace

std::string_view income_group_label(IncomeGroup group) {
  return kLabels[income_index(group)];
}

IncomeGroup income_group_parse(std::string_view label) {
  for (std::size_t i = 0; i < kLabels.size(); ++i) {
    if (label == kLabels[i]) return static_cast<IncomeGroup>(i);
  }
  throw std::invalid_argument("unknown income group label: \"" + std::string(label) + "\"");
}

IncomeGroup classify_gni(double gni_per_capita) {
  if (!std::isfinite(gni_per_capita) || gni_per_capita < 0.0) {
    throw std::domain_error("classify_gni: GNI per capita must be finite and non-negative");
  }
  // 2021-2022 bracket edges. Amounts strictly between two integer edges fall
  // into the lower bracket.
  if (gni_per_capita < 1046.0) return IncomeGroup::Low;
  if (gni_per_capita < 4096.0) return IncomeGroup::LowerMiddle;
  if (gni_per_capita < 12696.0) return IncomeGroup::UpperMiddle;
  return IncomeGroup::High;
}

bool is_iso_alpha2(std::string_view code) {
  return code.size() == 2 && code[0] >= 'A' && code[0] <= 'Z' && code[1] >= 'A' && code[1] <= 'Z';
}

const AggregateRow* AggregateTable::find(std::string_view id, std::string_view label) const {
  auto it = rows.find(GroupKeyView{id, label});
  return it == rows.end() ? nullptr : &it->second;
}

}  // namespace collab
