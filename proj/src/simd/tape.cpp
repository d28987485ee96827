#include "takagi/tape.hpp"

#include <algorithm>
#include <cstring>
#include <limits>
#include <unordered_map>

#include "takagi/detail/scalar_ops.hpp"
#include "takagi/errors.hpp"

namespace takagi {

using expr::Expr;
using expr::Kind;
using expr::Node;

namespace {

constexpr std::size_t kMaxChunk = 64;
constexpr std::uint32_t kNever = std::numeric_limits<std::uint32_t>::max();

// Identity of an instruction for common-subexpression merging.
struct Key {
  std::uint8_t op;
  std::uint64_t a = 0;  // payload bits
  std::uint64_t b = 0;
  std::vector<std::uint32_t> args;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const noexcept {
    std::size_t h = k.op;
    auto mix = [&h](std::uint64_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(k.a);
    mix(k.b);
    for (auto x : k.args) mix(x);
    return h;
  }
};

std::uint64_t bits(double d) {
  std::uint64_t u;
  std::memcpy(&u, &d, sizeof u);
  return u;
}

}  // namespace

Tape::Tape(std::span<const Expr> roots) {
  // Pass 1: post-order over the DAG, merging identical instructions.
  std::vector<Instr> code;
  std::vector<std::vector<std::uint32_t>> operands;
  std::unordered_map<const Node*, std::uint32_t> id_of;
  std::unordered_map<Key, std::uint32_t, KeyHash> cse;

  struct Frame {
    Expr e;
    std::size_t next_child;
  };
  std::vector<Frame> stack;
  std::vector<std::uint32_t> root_ids;

  for (const Expr& root : roots) {
    if (!id_of.contains(root.id())) stack.push_back({root, 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      const Node& n = f.e.node();
      if (f.next_child < n.children.size()) {
        const Expr& c = n.children[f.next_child++];
        if (!id_of.contains(c.id())) stack.push_back({c, 0});
        continue;
      }
      Instr ins{};
      Key key;
      ins.source = f.e;
      std::vector<std::uint32_t> args;
      for (const Expr& c : n.children) args.push_back(id_of.at(c.id()));
      switch (n.kind) {
        case Kind::Constant:
        case Kind::Parameter:
          ins.op = Op::Const;
          ins.value = n.value;
          key.a = bits(n.value.real());
          key.b = bits(n.value.imag());
          break;
        case Kind::Coordinate:
          ins.op = Op::Coord;
          ins.coord = n.index;
          key.a = n.index;
          required_dimension_ = std::max(required_dimension_, n.index + 1);
          break;
        case Kind::Sum: ins.op = Op::Add; break;
        case Kind::Product: ins.op = Op::Mul; break;
        case Kind::Negate: ins.op = Op::Neg; break;
        case Kind::Quotient: ins.op = Op::Div; break;
        case Kind::Power:
          ins.op = Op::Pow;
          ins.exponent = n.exponent;
          key.a = static_cast<std::uint64_t>(n.exponent.num());
          key.b = static_cast<std::uint64_t>(n.exponent.den());
          break;
        case Kind::Function:
          ins.op = Op::Func;
          ins.func = n.func;
          key.a = static_cast<std::uint64_t>(n.func);
          break;
      }
      key.op = static_cast<std::uint8_t>(ins.op);
      key.args = args;
      std::uint32_t id;
      if (auto it = cse.find(key); it != cse.end()) {
        id = it->second;
      } else {
        id = static_cast<std::uint32_t>(code.size());
        code.push_back(std::move(ins));
        operands.push_back(std::move(args));
        cse.emplace(std::move(key), id);
      }
      id_of.emplace(f.e.id(), id);
      stack.pop_back();
    }
    root_ids.push_back(id_of.at(root.id()));
  }

  // Pass 2: liveness and slot assignment.
  std::vector<std::uint32_t> last_use(code.size(), 0);
  for (std::uint32_t i = 0; i < code.size(); ++i) {
    for (auto a : operands[i]) last_use[a] = i;
  }
  for (auto r : root_ids) last_use[r] = kNever;

  std::vector<std::uint32_t> slot_of(code.size());
  std::vector<std::uint32_t> free_slots;
  for (std::uint32_t i = 0; i < code.size(); ++i) {
    std::uint32_t s;
    if (!free_slots.empty()) {
      s = free_slots.back();
      free_slots.pop_back();
    } else {
      s = static_cast<std::uint32_t>(slot_count_++);
    }
    slot_of[i] = s;
    code[i].dst = s;
    code[i].arg_begin = static_cast<std::uint32_t>(args_.size());
    code[i].arg_count = static_cast<std::uint32_t>(operands[i].size());
    for (auto a : operands[i]) args_.push_back(slot_of[a]);
    // Free operands that die here (once, even if used twice).
    std::vector<std::uint32_t> dying;
    for (auto a : operands[i]) {
      if (last_use[a] == i && std::find(dying.begin(), dying.end(), a) == dying.end()) {
        dying.push_back(a);
      }
    }
    for (auto a : dying) free_slots.push_back(slot_of[a]);
  }
  for (auto r : root_ids) root_slots_.push_back(slot_of[r]);
  code_ = std::move(code);
}

std::vector<std::complex<double>> Tape::evaluate(std::span<const Point> points,
                                                 const simd::LaneKernels& k) const {
  for (const Point& p : points) {
    if (p.size() < required_dimension_) {
      throw InputError("point has " + std::to_string(p.size()) + " coordinates, expected " +
                       std::to_string(required_dimension_));
    }
  }
  const std::size_t total = points.size();
  std::vector<std::complex<double>> out(root_slots_.size() * total);
  std::vector<double> regs;
  std::vector<std::uint8_t> real;
  for (std::size_t first = 0; first < total; first += kMaxChunk) {
    const std::size_t lanes = std::min(kMaxChunk, total - first);
    run_chunk(points, first, lanes, k, regs, real, out.data(), total);
  }
  return out;
}

void Tape::run_chunk(std::span<const Point> points, std::size_t first, std::size_t lanes,
                     const simd::LaneKernels& k, std::vector<double>& regs,
                     std::vector<std::uint8_t>& real, std::complex<double>* out,
                     std::size_t total_lanes) const {
  const std::size_t stride = 2 * lanes;
  regs.assign(slot_count_ * stride, 0.0);
  real.assign(slot_count_, 1);
  auto re = [&](std::uint32_t s) { return regs.data() + s * stride; };
  auto im = [&](std::uint32_t s) { return regs.data() + s * stride + lanes; };

  for (const Instr& ins : code_) {
    const std::uint32_t* a = args_.data() + ins.arg_begin;
    double* dr = re(ins.dst);
    double* di = im(ins.dst);
    switch (ins.op) {
      case Op::Const:
        std::fill(dr, dr + lanes, ins.value.real());
        std::fill(di, di + lanes, ins.value.imag());
        real[ins.dst] = ins.value.imag() == 0.0;
        break;
      case Op::Coord:
        for (std::size_t l = 0; l < lanes; ++l) dr[l] = points[first + l][ins.coord];
        std::fill(di, di + lanes, 0.0);
        real[ins.dst] = 1;
        break;
      case Op::Add:
      case Op::Mul: {
        const bool add = ins.op == Op::Add;
        bool is_real = real[a[0]] && real[a[1]];
        if (is_real) {
          (add ? k.add_real : k.mul_real)(re(a[0]), re(a[1]), dr, lanes);
        } else {
          (add ? k.add : k.mul)(re(a[0]), im(a[0]), re(a[1]), im(a[1]), dr, di, lanes);
        }
        for (std::uint32_t j = 2; j < ins.arg_count; ++j) {
          const bool both = is_real && real[a[j]];
          if (both) {
            (add ? k.add_real : k.mul_real)(dr, re(a[j]), dr, lanes);
          } else {
            if (is_real) std::fill(di, di + lanes, 0.0);
            (add ? k.add : k.mul)(dr, di, re(a[j]), im(a[j]), dr, di, lanes);
          }
          is_real = both;
        }
        if (is_real) std::fill(di, di + lanes, 0.0);
        real[ins.dst] = is_real;
        break;
      }
      case Op::Neg:
        k.neg(re(a[0]), im(a[0]), dr, di, lanes);
        real[ins.dst] = real[a[0]];
        if (real[ins.dst]) std::fill(di, di + lanes, 0.0);
        break;
      case Op::Div: {
        const double* br = re(a[1]);
        const double* bi = im(a[1]);
        for (std::size_t l = 0; l < lanes; ++l) {
          if (br[l] == 0.0 && bi[l] == 0.0) {
            detail::raise_status(detail::OpStatus::DivisionByZero, ins.source);
          }
        }
        if (real[a[0]] && real[a[1]]) {
          k.div_real(re(a[0]), br, dr, lanes);
          std::fill(di, di + lanes, 0.0);
          real[ins.dst] = 1;
        } else {
          k.div(re(a[0]), im(a[0]), br, bi, dr, di, lanes);
          real[ins.dst] = 0;
        }
        break;
      }
      case Op::Pow:
      case Op::Func: {
        const double* xr = re(a[0]);
        const double* xi = im(a[0]);
        bool all_real = true;
        for (std::size_t l = 0; l < lanes; ++l) {
          std::complex<double> v;
          const std::complex<double> x{xr[l], xi[l]};
          const detail::OpStatus st =
              ins.op == Op::Pow
                  ? detail::cpow(x, ins.exponent.num(), ins.exponent.den(), v)
                  : detail::capply(ins.func, x, v);
          if (st != detail::OpStatus::Ok) detail::raise_status(st, ins.source);
          dr[l] = v.real();
          di[l] = v.imag();
          all_real = all_real && v.imag() == 0.0;
        }
        real[ins.dst] = all_real;
        break;
      }
    }
    if (ins.op != Op::Const && ins.op != Op::Coord) {
      for (std::size_t l = 0; l < lanes; ++l) {
        if (!std::isfinite(dr[l]) || !std::isfinite(di[l])) {
          detail::raise_status(detail::OpStatus::NonFinite, ins.source);
        }
      }
    }
  }

  for (std::size_t r = 0; r < root_slots_.size(); ++r) {
    const double* rr = re(root_slots_[r]);
    const double* ri = im(root_slots_[r]);
    for (std::size_t l = 0; l < lanes; ++l) {
      out[r * total_lanes + first + l] = {rr[l], ri[l]};
    }
  }
}

}  // namespace takagi
