#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "spikeworks/snn/izhikevich.hpp"

namespace spikeworks::snn {

using Rng = std::mt19937_64;

struct GroupId {
	std::uint32_t value = 0;
	friend auto operator<=>(const GroupId&, const GroupId&) = default;
};

struct SynapseId {
	std::uint32_t value = 0;
	friend auto operator<=>(const SynapseId&, const SynapseId&) = default;
};

enum class NeuronKind { sensory, motor, inter };

std::string_view to_string(NeuronKind kind);
NeuronKind parse_neuron_kind(std::string_view text);

struct NeuronRef {
	GroupId group;
	std::uint32_t index = 0;
	friend auto operator<=>(const NeuronRef&, const NeuronRef&) = default;
};

struct NeuronGroup {
	GroupId id;
	std::string name;
	std::uint32_t size = 0;
	IzhikevichParams params;
	NeuronKind kind = NeuronKind::inter;
	// Standard deviation of the gaussian current noise added every tick.
	double noise_sigma = 0.0;
	// Position of neuron 0 in the flat state vector.
	std::uint32_t offset = 0;
};

struct Synapse {
	NeuronRef pre;
	NeuronRef post;
	double weight = 0.0;
	std::uint32_t delay_ms = 1;
};

struct SpikeEvent {
	std::int64_t time_ms = 0;
	GroupId group;
	std::uint32_t index = 0;
	friend auto operator<=>(const SpikeEvent&, const SpikeEvent&) = default;
};

using CurrentMap = std::map<NeuronRef, double>;

// A population of Izhikevich neurons joined by delayed current synapses.
//
// Synaptic input is delivered through a ring of arrival slots: a spike at
// tick t on a synapse with delay D adds its weight to the slot read at tick
// t + D. The network counts its own ticks; the time stamps of emitted spikes
// come from the caller's clock.
class Network {
public:
	Network();

	GroupId add_group(std::string name, std::uint32_t size,
	                  const IzhikevichParams& params = IzhikevichParams::regular_spiking(),
	                  NeuronKind kind = NeuronKind::inter, double noise_sigma = 0.0);

	SynapseId connect(NeuronRef pre, NeuronRef post, double weight, std::uint32_t delay_ms = 1);
	// Endpoints written as "group[index]", e.g. "ctx.ps[1]".
	SynapseId connect(std::string_view pre_spec, std::string_view post_spec, double weight,
	                  std::uint32_t delay_ms = 1);

	// One 1 ms tick over all neurons. Throws std::invalid_argument for unknown
	// neurons in `external` before touching any state.
	std::vector<SpikeEvent> advance(std::int64_t time_ms, const CurrentMap& external, Rng& rng);

	const std::vector<NeuronGroup>& groups() const { return groups_; }
	const std::vector<Synapse>& synapses() const { return synapses_; }
	const NeuronGroup& group(GroupId id) const;
	std::optional<GroupId> find_group(std::string_view name) const;
	NeuronRef resolve(std::string_view spec) const;
	std::string describe(NeuronRef ref) const;

	std::size_t neuron_count() const { return states_.size(); }
	bool contains(NeuronRef ref) const;

	const NeuronState& state(NeuronRef ref) const;
	void set_state(NeuronRef ref, const NeuronState& state);

	// Total input current used for the neuron during the last advance().
	double input_current(NeuronRef ref) const;
	// Synaptic current already scheduled to arrive at the next advance().
	double pending_synaptic_current(NeuronRef ref) const;
	// Membrane potential recorded during the last tick, capped at threshold.
	double recorded_potential(NeuronRef ref) const;

	std::uint32_t max_delay() const { return static_cast<std::uint32_t>(arrivals_.size()) - 1; }
	std::uint64_t ticks() const { return ticks_; }

private:
	std::size_t flat_index(NeuronRef ref) const;
	void grow_ring(std::uint32_t delay_ms);

	std::vector<NeuronGroup> groups_;
	std::vector<Synapse> synapses_;
	std::vector<NeuronState> states_;
	std::vector<double> last_current_;
	std::vector<double> recorded_v_;
	std::vector<std::vector<std::uint32_t>> outgoing_;   // flat pre index -> synapse indices
	std::vector<std::vector<double>> arrivals_;          // slot -> per-neuron current
	std::size_t cursor_ = 0;
	std::uint64_t ticks_ = 0;
};

// Parses "name[index]" into its parts.
std::pair<std::string, std::uint32_t> parse_neuron_spec(std::string_view spec);

} // namespace spikeworks::snn
