#include "alt/presets.hpp"

#include <algorithm>

namespace alt {

const std::vector<Preset>& presets() {
    static const std::vector<Preset> table = {
        {"basicmotions",
         "BasicMotions",
         0.25,
         {{53, 27, 1}},
         {"mean-mean", "p5-m4"},
         false,
         {40, 40, 100, 6, 4}},
        {"coffee", "Coffee", 0.25, {{3, 2, 1}}, {"p5-mean"}, false, {28, 28, 286, 1, 2}},
        {"epilepsy",
         "Epilepsy",
         0.25,
         {{29, 15, 1}, {69, 35, 1}, {89, 45, 1}, {149, 75, 1}, {169, 85, 1}, {189, 95, 1}},
         {"mean-mean"},
         false,
         {137, 138, 207, 3, 4}},
        {"epilepsy2",
         "Epilepsy2",
         0.25,
         {{19, 10, 1}, {29, 15, 1}},
         {"p5-mean", "p5-var"},
         true, // 11420 test instances
         {80, 11420, 178, 1, 2}},
        {"forda",
         "FordA",
         0.20,
         {{23, 12, 1}, {29, 15, 1}, {85, 43, 1}, {95, 48, 1}, {205, 103, 1}},
         {"p5-mean"},
         true,
         {1320, 3601, 500, 1, 2}},
        {"fordb",
         "FordB",
         0.50,
         {{19, 10, 1},
          {39, 20, 1},
          {129, 65, 1},
          {139, 70, 1},
          {159, 80, 1},
          {169, 85, 1},
          {179, 90, 1},
          {199, 100, 1},
          {209, 105, 1},
          {275, 138, 1}},
         {"p5-mean"},
         true,
         {810, 3636, 500, 1, 2}},
        {"gunpoint1",
         "GunPoint",
         0.20,
         {{7, 4, 1},
          {31, 2, 1},
          {51, 6, 1},
          {81, 6, 1},
          {121, 11, 1},
          {121, 31, 1},
          {121, 61, 1},
          {121, 5, 1}},
         {"mean-mean"},
         false,
         {50, 150, 150, 1, 2}},
        {"gunpoint2",
         "GunPointAgeSpan",
         0.50,
         {{49, 25, 1}, {59, 30, 1}, {69, 35, 1}, {89, 45, 1}},
         {"mean-mean", "p5-kurt"},
         false,
         {135, 316, 150, 1, 2}},
        {"gunpoint3",
         "GunPointMaleVersusFemale",
         0.20,
         {{3, 2, 1}, {19, 10, 1}, {39, 20, 1}, {109, 55, 1}},
         {"mean-mean", "p5-mean"},
         false,
         {135, 316, 150, 1, 2}},
        {"gunpoint4",
         "GunPointOldVersusYoung",
         0.50,
         {{3, 2, 1}},
         {"mean-mean"},
         false,
         {135, 316, 150, 1, 2}},
        {"powercons",
         "PowerCons",
         0.20,
         {{3, 2, 1}, {99, 50, 1}},
         {"mean-mean"},
         false,
         {180, 180, 144, 1, 2}},
    };
    return table;
}

const Preset* find_preset(const std::string& name) {
    std::string key = name;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (const Preset& p : presets())
        if (p.name == key) return &p;
    return nullptr;
}

} // namespace alt
