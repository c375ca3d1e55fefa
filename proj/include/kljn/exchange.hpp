#pragma once

// Bit exchange periods (BEPs): coin flips, noise synthesis, wire measurement,
// level classification, the keep/discard rule and key accumulation.

#include "kljn/circuit.hpp"
#include "kljn/keycodec.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace kljn::exchange {

using circuit::Choice;
using circuit::LevelClass;
using Bit = std::uint8_t;

struct ChoicePair {
    Choice alice = Choice::Low;
    Choice bob = Choice::Low;
    friend bool operator==(const ChoicePair&, const ChoicePair&) = default;
};

/// "HL" -> {High, Low}; comma-separated lists give a schedule ("LH,HL").
std::vector<ChoicePair> parse_schedule(std::string_view text);

struct BepConfig {
    circuit::ResistorPair pair;
    double temperature_k = 1e18;
    double bandwidth_hz = 500.0;
    std::size_t samples_per_bep = 1000;
    std::size_t ensemble_count = 10;
    std::uint64_t seed = 0;
    /// When non-empty, BEP i uses forced_schedule[i % size] instead of coin flips.
    std::vector<ChoicePair> forced_schedule;
};

/// InvalidConfig unless the pair is valid, samples_per_bep >= 16,
/// ensemble_count >= 1 and temperature / bandwidth are positive.
void validate(const BepConfig& config);

struct BepResult {
    Choice alice_choice = Choice::Low;
    Choice bob_choice = Choice::Low;
    double measured_ms = 0.0;
    LevelClass level = LevelClass::LL;
    std::optional<Bit> secure_bit;
    Choice alice_inferred_bob = Choice::Low;
    Choice bob_inferred_alice = Choice::Low;
};

/// Coin flips from substream derive(seed, Choice, {bep_index, party}), or the
/// forced schedule. Independent of samples_per_bep.
ChoicePair draw_choices(const BepConfig& config, std::uint64_t bep_index);

/// One party's generator output for the BEP, at the Nyquist step, scaled to
/// the chosen resistor. party 0 is Alice, 1 is Bob.
noise::ScaledNoise synthesize_party_noise(const BepConfig& config, std::uint64_t bep_index,
                                          int party, Choice choice);

circuit::WireRealization realize_wire(const BepConfig& config, std::uint64_t bep_index,
                                      ChoicePair choices);

/// Deduce the other side's resistor from one's own choice and the level class.
Choice infer_other(Choice own, LevelClass level) noexcept;

BepResult run_bep(const BepConfig& config, std::uint64_t bep_index);
BepResult run_bep(const BepConfig& config, std::uint64_t bep_index, ChoicePair choices);

/// BEPs [first, first + count), computed on `jobs` threads, returned in index order.
std::vector<BepResult> run_beps(const BepConfig& config, std::uint64_t first, std::size_t count,
                                unsigned jobs = 1);

/// The bit each party would keep: present whenever the level is Secure.
std::optional<Bit> alice_key_bit(const BepResult& result) noexcept;
std::optional<Bit> bob_key_bit(const BepResult& result) noexcept;

/// Either party's inference contradicts the other's true choice.
bool has_inference_error(const BepResult& result) noexcept;

struct KeyMaterial {
    keycodec::BitString bits;
    std::string hex;
    std::size_t beps_consumed = 0;
    std::size_t discarded = 0;
    std::size_t error_count = 0;
};

struct AccumulateOptions {
    std::uint64_t first_bep_index = 0;
    std::optional<std::size_t> max_beps;
    unsigned jobs = 1;
};

/// Runs BEPs in index order until `target_bits` secure bits are collected.
/// LengthNotMultipleOfFour unless target_bits is a positive multiple of 4;
/// BudgetExceeded when max_beps is reached first.
KeyMaterial accumulate_key(const BepConfig& config, std::size_t target_bits,
                           const AccumulateOptions& options = {});

struct EveView {
    LevelClass level = LevelClass::LL;
    std::optional<Bit> learned_bit;
};

/// Eve sees only the wire: she reclassifies measured_ms with the public levels.
EveView eve_view(const BepConfig& config, const BepResult& result);

/// Accuracy of the better of the two constant guesses over secure bits.
double eve_constant_guess_accuracy(std::span<const BepResult> results);

struct ExchangeReport {
    std::size_t beps = 0;
    std::size_t secure_bits = 0;
    std::size_t error_count = 0;
    double discard_rate = 0.0;
    double bit_balance = 0.0;
    double ber = 0.0;
    double hl_lh_ms_gap = 0.0;
    // Empirical mean squares by true configuration (NaN when absent).
    double mean_ms_ll = 0.0;
    double mean_ms_secure = 0.0;
    double mean_ms_hh = 0.0;
};

/// EmptyInput on an empty list.
ExchangeReport exchange_report(std::span<const BepResult> results);

nlohmann::ordered_json to_json(const BepResult& result);
BepResult bep_result_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const KeyMaterial& key);
nlohmann::ordered_json to_json(const ExchangeReport& report);

} // namespace kljn::exchange
