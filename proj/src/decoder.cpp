#include "ncsat/decoder.hpp"

#include <algorithm>

#include "ncsat/errors.hpp"

namespace ncsat {

Decoder::Decoder(const GaloisField& field, std::size_t payload_bytes, bool eager)
  : field_{&field}
  , payload_bytes_{payload_bytes}
  , eager_{eager}
  , echelon_{field}
{}

Decoder::State Decoder::state(std::uint64_t index) const noexcept
{
  if (index < next_)
    return erased_.contains(index) ? State::erased : State::known;
  const std::uint64_t off = index - next_;
  return off < states_.size() ? states_[off] : State::unseen;
}

void Decoder::ensure_tracked(std::uint64_t index)
{
  if (index >= next_ && index - next_ >= states_.size())
    states_.resize(index - next_ + 1, State::unseen);
}

void Decoder::remember(std::uint64_t index, std::vector<FieldElement> payload)
{
  if (payload_bytes_ == 0)
    return;
  if (payloads_.size() <= index)
    payloads_.resize(index + 1);
  payload.resize(payload_bytes_, 0);
  payloads_[index] = std::move(payload);
}

std::size_t Decoder::ordinal(std::uint64_t index) const noexcept
{
  return static_cast<std::size_t>(std::lower_bound(columns_.begin(), columns_.end(), index) - columns_.begin());
}

std::vector<DeliveryEvent> Decoder::ingest(const CodedPacket& packet, std::uint64_t slot)
{
  std::vector<DeliveryEvent> events;

  if (packet.is_uncoded())
  {
    const std::uint64_t idx = packet.index();
    switch (state(idx))
    {
      case State::known:
      case State::erased:
        return events;
      case State::column:
      {
        std::vector<FieldElement> unit(ordinal(idx) + 1, 0);
        unit.back() = 1;
        echelon_.insert(std::move(unit), packet.payload());
        break;
      }
      case State::unseen:
        ensure_tracked(idx);
        states_[idx - next_] = State::known;
        remember(idx, packet.payload());
        break;
    }
    solve();
    advance(slot, events);
    return events;
  }

  const CodingWindow w = packet.window();
  if (w.hi < next_)
    return events;

  // A coefficient on an abandoned packet can never be cancelled.
  for (auto it = erased_.lower_bound(w.lo); it != erased_.end() && *it <= w.hi; ++it)
    if (packet.coefficient(*it) != 0)
      return events;

  ensure_tracked(w.hi);
  for (std::uint64_t idx = std::max(columnized_through_ + 1, next_); idx <= w.hi; ++idx)
  {
    auto& s = states_[idx - next_];
    if (s == State::unseen)
    {
      s = State::column;
      columns_.push_back(idx);
      echelon_.add_columns(1);
    }
  }
  columnized_through_ = std::max(columnized_through_, w.hi);

  const std::size_t end = static_cast<std::size_t>(
    std::upper_bound(columns_.begin(), columns_.end(), w.hi) - columns_.begin());
  const std::size_t begin = ordinal(w.lo);
  if (begin >= end)
    return events;  // spans only known packets

  std::vector<FieldElement> coeffs(end, 0);
  for (std::size_t o = begin; o < end; ++o)
    coeffs[o] = packet.coefficient(columns_[o]);

  std::vector<FieldElement> payload = packet.payload();
  if (payload_bytes_ > 0)
  {
    payload.resize(payload_bytes_, 0);
    for (std::uint64_t idx = w.lo; idx <= w.hi; ++idx)
    {
      if (state(idx) != State::known)
        continue;
      const FieldElement c = packet.coefficient(idx);
      if (c != 0)
        field_->axpy(payload, c, payloads_[idx]);
    }
  }

  echelon_.insert(std::move(coeffs), std::move(payload));
  solve();
  advance(slot, events);
  return events;
}

void Decoder::solve()
{
  const std::size_t m = echelon_.leading_pivots();
  if (m == 0 || (!eager_ && m < columns_.size()))
    return;
  auto values = echelon_.solve_front(m);
  for (std::size_t j = 0; j < m; ++j)
  {
    const std::uint64_t idx = columns_.front();
    columns_.pop_front();
    states_[idx - next_] = State::known;
    remember(idx, std::move(values[j]));
  }
  ++solves_;
}

void Decoder::advance(std::uint64_t slot, std::vector<DeliveryEvent>& out)
{
  while (!states_.empty() && (states_.front() == State::known || states_.front() == State::erased))
  {
    if (states_.front() == State::known)
    {
      out.push_back({next_, slot});
      ++delivered_;
    }
    states_.pop_front();
    ++next_;
  }
}

Decoder::Flush Decoder::abandon_through(std::uint64_t hi, std::uint64_t slot)
{
  Flush f;
  if (hi >= next_)
  {
    ensure_tracked(hi);
    const std::size_t c = static_cast<std::size_t>(
      std::upper_bound(columns_.begin(), columns_.end(), hi) - columns_.begin());
    echelon_.drop_front(c);
    columns_.erase(columns_.begin(), columns_.begin() + static_cast<std::ptrdiff_t>(c));
    for (std::uint64_t idx = next_; idx <= hi; ++idx)
    {
      auto& s = states_[idx - next_];
      if (s == State::unseen || s == State::column)
      {
        s = State::erased;
        erased_.insert(idx);
        f.erased.push_back(idx);
      }
    }
    columnized_through_ = std::max(columnized_through_, hi);
  }
  advance(slot, f.delivered);
  solve();
  advance(slot, f.delivered);
  return f;
}

std::size_t Decoder::dof_in(CodingWindow w) const
{
  std::size_t dof = 0;
  for (std::uint64_t idx = w.lo; idx <= w.hi; ++idx)
  {
    const State s = state(idx);
    if (s == State::known)
      ++dof;
    else if (s == State::column && echelon_.has_pivot(ordinal(idx)))
      ++dof;
  }
  return dof;
}

const std::vector<FieldElement>* Decoder::recovered_payload(std::uint64_t index) const noexcept
{
  if (payload_bytes_ == 0 || index >= payloads_.size() || state(index) != State::known)
    return nullptr;
  return &payloads_[index];
}

GenerationDecoder::GenerationDecoder(const GaloisField& field, GenerationLayout layout, std::size_t payload_bytes)
  : core_{field, payload_bytes}
  , layout_{layout}
{
  if (layout.k == 0)
    throw ContractViolation("generation size must be >= 1");
}

std::vector<DeliveryEvent> GenerationDecoder::ingest(const CodedPacket& packet, std::uint64_t slot)
{
  if (!packet.is_uncoded())
  {
    const auto g = packet.generation();
    if (!g || *g == 0 || *g > layout_.count())
      throw ContractViolation("coded packet without a valid generation id");
    const auto gw = layout_.window(*g);
    const auto w = packet.window();
    if (w.lo < gw.lo || w.hi > gw.hi)
      throw ContractViolation("coded packet spans outside its generation");
  }
  return core_.ingest(packet, slot);
}

std::size_t GenerationDecoder::dof(std::uint32_t generation) const
{
  if (generation == 0 || generation > layout_.count())
    throw ContractViolation("unknown generation id");
  return core_.dof_in(layout_.window(generation));
}

std::size_t GenerationDecoder::deficit(std::uint32_t generation) const
{
  const auto size = layout_.window(generation).size();
  const auto d = dof(generation);
  return d >= size ? 0 : static_cast<std::size_t>(size - d);
}

Decoder::Flush GenerationDecoder::flush_generation(std::uint32_t generation, std::uint64_t slot)
{
  if (generation != flushed_through_ + 1 || generation > layout_.count())
    throw ContractViolation("generations must be flushed exactly once, in order");
  flushed_through_ = generation;
  return core_.abandon_through(layout_.window(generation).hi, slot);
}

} // namespace ncsat
