#pragma once

#include "gna/series_io.hpp"

#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace gna::testing {

enum class Generator { Uniform, Gaussian, Sinusoidal, Spiky };
inline constexpr Generator kGenerators[] = {Generator::Uniform, Generator::Gaussian, Generator::Sinusoidal,
                                            Generator::Spiky};

std::vector<double> generate(Generator kind, std::size_t n, std::mt19937_64& rng);

// Integer-valued random walk; many ties and exactly collinear triples.
std::vector<double> quantized_walk(std::size_t n, std::mt19937_64& rng);

// Two-class problem: class 0 is a noisy sinusoid, class 1 is white noise.
// Raw labels are -1 and 1, as in binary UCR sets.
Dataset make_two_class_dataset(const std::string& name, int n_train, int n_test, int length,
                               std::uint64_t seed);

// Writes <dir>/<name>_TRAIN.tsv and <dir>/<name>_TEST.tsv.
void write_dataset(const std::filesystem::path& dir, const Dataset& ds);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

} // namespace gna::testing
