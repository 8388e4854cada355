#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace alt {

// Archive shape a preset expects: used to sanity-check loaded fixtures.
struct DatasetInfo {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::size_t length = 0;   // h
    std::size_t channels = 1; // m
    std::size_t classes = 2;  // c
};

struct Preset {
    std::string name;         // CLI name, lowercase
    std::string archive_name; // file stem inside the archive
    double learn_ratio = 0.25;
    std::vector<std::array<std::size_t, 3>> windows; // (r, l, k)
    std::vector<std::string> methods;                // extraction tokens
    bool long_running = false; // multi-hour transform; opt-in via --allow-long
    DatasetInfo expected;
};

const std::vector<Preset>& presets();
const Preset* find_preset(const std::string& name); // nullptr when unknown

} // namespace alt
