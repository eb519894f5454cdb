#include "spikeworks/snn/network.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace spikeworks::snn {

std::string_view to_string(NeuronKind kind)
{
	switch (kind) {
	case NeuronKind::sensory: return "sensory";
	case NeuronKind::motor: return "motor";
	case NeuronKind::inter: return "inter";
	}
	return "inter";
}

NeuronKind parse_neuron_kind(std::string_view text)
{
	if (text == "sensory") return NeuronKind::sensory;
	if (text == "motor") return NeuronKind::motor;
	if (text == "inter") return NeuronKind::inter;
	throw std::invalid_argument("unknown neuron kind '" + std::string(text) + "'");
}

std::pair<std::string, std::uint32_t> parse_neuron_spec(std::string_view spec)
{
	const auto open = spec.find('[');
	if (open == std::string_view::npos || open == 0 || spec.size() < open + 3 || spec.back() != ']')
		throw std::invalid_argument("neuron spec must look like 'group[index]': " + std::string(spec));
	const auto digits = spec.substr(open + 1, spec.size() - open - 2);
	std::uint32_t index = 0;
	const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
	if (ec != std::errc{} || ptr != digits.data() + digits.size())
		throw std::invalid_argument("bad neuron index in spec: " + std::string(spec));
	return {std::string(spec.substr(0, open)), index};
}

Network::Network() : arrivals_(2) {}

GroupId Network::add_group(std::string name, std::uint32_t size, const IzhikevichParams& params,
                           NeuronKind kind, double noise_sigma)
{
	if (name.empty())
		throw std::invalid_argument("group name must not be empty");
	if (find_group(name))
		throw std::invalid_argument("duplicate group name '" + name + "'");
	if (size == 0)
		throw std::invalid_argument("group '" + name + "' must contain at least one neuron");
	if (!std::isfinite(noise_sigma) || noise_sigma < 0.0)
		throw std::invalid_argument("noise sigma must be a non-negative number");
	params.validate();

	NeuronGroup g;
	g.id = GroupId{static_cast<std::uint32_t>(groups_.size())};
	g.name = std::move(name);
	g.size = size;
	g.params = params;
	g.kind = kind;
	g.noise_sigma = noise_sigma;
	g.offset = static_cast<std::uint32_t>(states_.size());

	const auto total = states_.size() + size;
	states_.resize(total, resting_state(params));
	last_current_.resize(total, 0.0);
	recorded_v_.resize(total, resting_state(params).v);
	outgoing_.resize(total);
	for (auto& slot : arrivals_)
		slot.resize(total, 0.0);

	groups_.push_back(std::move(g));
	return groups_.back().id;
}

SynapseId Network::connect(NeuronRef pre, NeuronRef post, double weight, std::uint32_t delay_ms)
{
	if (!contains(pre))
		throw std::invalid_argument("presynaptic neuron does not exist");
	if (!contains(post))
		throw std::invalid_argument("postsynaptic neuron does not exist");
	if (delay_ms < 1)
		throw std::invalid_argument("synaptic delay must be at least 1 ms");
	if (!std::isfinite(weight))
		throw std::invalid_argument("synaptic weight must be finite");

	grow_ring(delay_ms);
	const auto id = SynapseId{static_cast<std::uint32_t>(synapses_.size())};
	synapses_.push_back({pre, post, weight, delay_ms});
	outgoing_[flat_index(pre)].push_back(id.value);
	return id;
}

SynapseId Network::connect(std::string_view pre_spec, std::string_view post_spec, double weight,
                           std::uint32_t delay_ms)
{
	return connect(resolve(pre_spec), resolve(post_spec), weight, delay_ms);
}

void Network::grow_ring(std::uint32_t delay_ms)
{
	const std::size_t needed = std::size_t{delay_ms} + 1;
	if (needed <= arrivals_.size())
		return;
	std::vector<std::vector<double>> ring(needed, std::vector<double>(states_.size(), 0.0));
	for (std::size_t k = 0; k < arrivals_.size(); ++k)
		ring[k] = std::move(arrivals_[(cursor_ + k) % arrivals_.size()]);
	arrivals_ = std::move(ring);
	cursor_ = 0;
}

std::vector<SpikeEvent> Network::advance(std::int64_t time_ms, const CurrentMap& external, Rng& rng)
{
	for (const auto& [ref, current] : external) {
		if (!contains(ref))
			throw std::invalid_argument("external current targets an unknown neuron");
		if (!std::isfinite(current))
			throw IntegrityError("non-finite external current");
	}

	auto& slot = arrivals_[cursor_];
	for (std::size_t i = 0; i < states_.size(); ++i)
		last_current_[i] = slot[i];
	for (const auto& [ref, current] : external)
		last_current_[flat_index(ref)] += current;

	std::normal_distribution<double> gauss(0.0, 1.0);
	for (const auto& g : groups_) {
		if (g.noise_sigma <= 0.0)
			continue;
		for (std::uint32_t i = 0; i < g.size; ++i)
			last_current_[g.offset + i] += g.noise_sigma * gauss(rng);
	}

	std::vector<SpikeEvent> spikes;
	for (const auto& g : groups_) {
		for (std::uint32_t i = 0; i < g.size; ++i) {
			const auto k = g.offset + i;
			const auto r = step_neuron(states_[k], g.params, last_current_[k]);
			states_[k] = r.state;
			recorded_v_[k] = r.recorded_v;
			if (r.fired)
				spikes.push_back({time_ms, g.id, i});
		}
	}

	std::fill(slot.begin(), slot.end(), 0.0);
	const auto ring = arrivals_.size();
	for (const auto& s : spikes) {
		const auto pre = groups_[s.group.value].offset + s.index;
		for (const auto syn : outgoing_[pre]) {
			const auto& edge = synapses_[syn];
			arrivals_[(cursor_ + edge.delay_ms) % ring][flat_index(edge.post)] += edge.weight;
		}
	}
	cursor_ = (cursor_ + 1) % ring;
	++ticks_;
	return spikes;
}

const NeuronGroup& Network::group(GroupId id) const
{
	if (id.value >= groups_.size())
		throw std::out_of_range("unknown neuron group id");
	return groups_[id.value];
}

std::optional<GroupId> Network::find_group(std::string_view name) const
{
	for (const auto& g : groups_)
		if (g.name == name)
			return g.id;
	return std::nullopt;
}

NeuronRef Network::resolve(std::string_view spec) const
{
	const auto [name, index] = parse_neuron_spec(spec);
	const auto id = find_group(name);
	if (!id)
		throw std::invalid_argument("unknown neuron group '" + name + "'");
	const NeuronRef ref{*id, index};
	if (!contains(ref))
		throw std::invalid_argument("neuron index out of range: " + std::string(spec));
	return ref;
}

std::string Network::describe(NeuronRef ref) const
{
	return group(ref.group).name + "[" + std::to_string(ref.index) + "]";
}

bool Network::contains(NeuronRef ref) const
{
	return ref.group.value < groups_.size() && ref.index < groups_[ref.group.value].size;
}

std::size_t Network::flat_index(NeuronRef ref) const
{
	if (!contains(ref))
		throw std::out_of_range("neuron reference out of range");
	return groups_[ref.group.value].offset + ref.index;
}

const NeuronState& Network::state(NeuronRef ref) const { return states_[flat_index(ref)]; }

void Network::set_state(NeuronRef ref, const NeuronState& state) { states_[flat_index(ref)] = state; }

double Network::input_current(NeuronRef ref) const { return last_current_[flat_index(ref)]; }

double Network::pending_synaptic_current(NeuronRef ref) const
{
	return arrivals_[cursor_][flat_index(ref)];
}

double Network::recorded_potential(NeuronRef ref) const { return recorded_v_[flat_index(ref)]; }

} // namespace spikeworks::snn
