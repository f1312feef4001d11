#include <cmath>

#include "ats/model.hpp"
#include "ats/ops.hpp"

namespace ats {
namespace {

void add_to_bias(Parameter& bias, const Vec& d) {
  for (std::size_t i = 0; i < d.size(); ++i) bias.grad(0, i) += d[i];
}

void add_to_embedding_row(Parameter& embedding, int id, const Vec& d) {
  double* row =
      embedding.grad.data() + static_cast<std::size_t>(id) * embedding.grad.cols();
  for (std::size_t i = 0; i < d.size(); ++i) row[i] += d[i];
}

}  // namespace

namespace detail {

// Reverses one cell application: accumulates the weight gradients, adds the
// previous-state gradient into dh_prev, returns the input gradient.
Vec gru_cell_backward(GruWeights& w, const GruCellCache& c, const Vec& dh_new,
                      Vec& dh_prev) {
  const std::size_t h = c.h_prev.size();
  Vec da_z(h), da_r(h), da_h(h);
  for (std::size_t i = 0; i < h; ++i) {
    const double dz = dh_new[i] * (c.h_cand[i] - c.h_prev[i]);
    da_z[i] = dz * dsigmoid_from_value(c.z[i]);
    const double dh_cand = dh_new[i] * c.z[i];
    da_h[i] = dh_cand * dtanh_from_value(c.h_cand[i]);
    dh_prev[i] += dh_new[i] * (1.0 - c.z[i]);
  }

  add_outer(w.w_h.grad, c.x, da_h);
  add_outer(w.u_h.grad, c.rh, da_h);
  add_to_bias(w.b_h, da_h);
  const Vec drh = matvec(w.u_h.value, da_h);
  for (std::size_t i = 0; i < h; ++i) {
    da_r[i] = drh[i] * c.h_prev[i] * dsigmoid_from_value(c.r[i]);
    dh_prev[i] += drh[i] * c.r[i];
  }

  add_outer(w.w_r.grad, c.x, da_r);
  add_outer(w.u_r.grad, c.h_prev, da_r);
  add_to_bias(w.b_r, da_r);
  axpy(dh_prev, 1.0, matvec(w.u_r.value, da_r));

  add_outer(w.w_z.grad, c.x, da_z);
  add_outer(w.u_z.grad, c.h_prev, da_z);
  add_to_bias(w.b_z, da_z);
  axpy(dh_prev, 1.0, matvec(w.u_z.value, da_z));

  Vec dx = matvec(w.w_z.value, da_z);
  axpy(dx, 1.0, matvec(w.w_r.value, da_r));
  axpy(dx, 1.0, matvec(w.w_h.value, da_h));
  return dx;
}

// Attention backward for one decoder step. dcontext is the gradient on the
// context vector; adds into ds_prev, the annotation grads and the attention
// weights' grads. The tanh features are recomputed instead of cached.
void attention_backward(ModelParams& p, const Vec& s_prev,
                        const std::vector<Vec>& annotations, const Vec& alpha,
                        const Vec& dcontext, Vec& ds_prev, std::vector<Vec>& dann) {
  const std::size_t len = annotations.size();
  const std::size_t hd = s_prev.size();

  Vec dalpha(len, 0.0);
  for (std::size_t j = 0; j < len; ++j) {
    double dot = 0.0;
    for (std::size_t k = 0; k < dcontext.size(); ++k) {
      dot += dcontext[k] * annotations[j][k];
    }
    dalpha[j] = dot;
    axpy(dann[j], alpha[j], dcontext);
  }

  // Softmax backward over the unmasked support.
  double weighted = 0.0;
  for (std::size_t j = 0; j < len; ++j) weighted += alpha[j] * dalpha[j];

  const std::size_t a_dim = p.attn_dim();
  for (std::size_t j = 0; j < len; ++j) {
    const double de = alpha[j] * (dalpha[j] - weighted);
    const Vec cvec = concat(s_prev, annotations[j]);
    const Vec q = matvec(p.attn_w.value, cvec);
    Vec dq(a_dim);
    for (std::size_t a = 0; a < a_dim; ++a) {
      const double tq = std::tanh(q[a]);
      p.attn_v.grad(0, a) += de * tq;
      dq[a] = de * p.attn_v.value(0, a) * dtanh_from_value(tq);
    }
    add_outer(p.attn_w.grad, dq, cvec);
    const Vec dcvec = matvec_t(p.attn_w.value, dq);
    for (std::size_t k = 0; k < hd; ++k) ds_prev[k] += dcvec[k];
    for (std::size_t k = hd; k < dcvec.size(); ++k) dann[j][k - hd] += dcvec[k];
  }
}

}  // namespace detail

namespace {

void backward_example(const detail::ExampleCache& ec, ModelParams& p) {
  const std::size_t e_dim = p.embed_dim();
  const std::size_t he = p.enc_hidden();
  const std::size_t hd = p.dec_hidden();
  const std::size_t len = ec.input_len;

  std::vector<Vec> dann(len, Vec(2 * he, 0.0));
  std::vector<Vec> dstates(ec.states.size(), Vec(hd, 0.0));

  for (std::size_t i = ec.steps.size(); i-- > 0;) {
    const detail::DecoderStepCache& sc = ec.steps[i];

    // Output projection: logits = out_w^T [s; c; emb] + out_b.
    add_outer(p.out_w.grad, sc.out_concat, sc.dlogits);
    add_to_bias(p.out_b, sc.dlogits);
    const Vec dconcat = matvec(p.out_w.value, sc.dlogits);

    Vec ds(hd);
    Vec dcontext(2 * he);
    Vec demb(e_dim);
    std::copy(dconcat.begin(), dconcat.begin() + hd, ds.begin());
    std::copy(dconcat.begin() + hd, dconcat.begin() + hd + 2 * he, dcontext.begin());
    std::copy(dconcat.begin() + hd + 2 * he, dconcat.end(), demb.begin());
    axpy(ds, 1.0, dstates[i + 1]);  // recurrent gradient from the next step

    const Vec dx = detail::gru_cell_backward(p.dec, sc.gru, ds, dstates[i]);
    for (std::size_t k = 0; k < e_dim; ++k) demb[k] += dx[k];
    for (std::size_t k = 0; k < 2 * he; ++k) dcontext[k] += dx[e_dim + k];

    detail::attention_backward(p, ec.states[i], ec.annotations, sc.alpha, dcontext,
                               dstates[i], dann);
    add_to_embedding_row(p.embedding, sc.y_prev, demb);
  }

  // Decoder start state: s0 = tanh(init_w^T bwd_0 + init_b).
  const Vec bwd0 = slice(ec.annotations[0], he, 2 * he);
  Vec ds0_pre(hd);
  for (std::size_t k = 0; k < hd; ++k) {
    ds0_pre[k] = dstates[0][k] * dtanh_from_value(ec.s0[k]);
  }
  add_outer(p.init_w.grad, bwd0, ds0_pre);
  add_to_bias(p.init_b, ds0_pre);
  {
    const Vec dbwd0 = matvec(p.init_w.value, ds0_pre);
    for (std::size_t k = 0; k < he; ++k) dann[0][he + k] += dbwd0[k];
  }

  // Forward-direction encoder GRU, newest position first.
  Vec carry(he, 0.0);
  for (std::size_t t = len; t-- > 0;) {
    Vec dh = slice(dann[t], 0, he);
    axpy(dh, 1.0, carry);
    carry.assign(he, 0.0);
    const Vec dx = detail::gru_cell_backward(p.enc_fwd, ec.fwd[t], dh, carry);
    add_to_embedding_row(p.embedding, ec.input_ids[t], dx);
  }

  // The backward-direction GRU reads right to left, so its BPTT walks the
  // positions in ascending order.
  carry.assign(he, 0.0);
  for (std::size_t t = 0; t < len; ++t) {
    Vec dh = slice(dann[t], he, 2 * he);
    axpy(dh, 1.0, carry);
    carry.assign(he, 0.0);
    const Vec dx = detail::gru_cell_backward(p.enc_bwd, ec.bwd[t], dh, carry);
    add_to_embedding_row(p.embedding, ec.input_ids[t], dx);
  }
}

}  // namespace

void backward(const ForwardCache& cache, ModelParams& p) {
  for (const auto& ec : cache.examples) backward_example(ec, p);
}

}  // namespace ats
