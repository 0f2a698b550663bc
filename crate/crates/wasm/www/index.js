import init, { trotter_sweep, fock_distribution, train_ansatz } from "./pkg/coherent_wasm.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function frame(canvas, xs, ys, { logY = false } = {}) {
  const ctx = canvas.getContext("2d");
  const pad = { l: 70, r: 20, t: 15, b: 35 };
  const w = canvas.width - pad.l - pad.r;
  const h = canvas.height - pad.t - pad.b;
  const ty = logY ? (v) => Math.log10(Math.max(v, 1e-16)) : (v) => v;
  const x0 = Math.min(...xs), x1 = Math.max(...xs);
  let y0 = Math.min(...ys.map(ty)), y1 = Math.max(...ys.map(ty));
  if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
  const px = (x) => pad.l + (x1 === x0 ? w / 2 : ((x - x0) / (x1 - x0)) * w);
  const py = (y) => pad.t + h - ((ty(y) - y0) / (y1 - y0)) * h;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#000";
  ctx.beginPath();
  ctx.moveTo(pad.l, pad.t);
  ctx.lineTo(pad.l, pad.t + h);
  ctx.lineTo(pad.l + w, pad.t + h);
  ctx.stroke();
  ctx.fillStyle = "#000";
  ctx.font = "11px sans-serif";
  for (let i = 0; i <= 4; i++) {
    const v = y0 + ((y1 - y0) * i) / 4;
    const label = logY ? `1e${v.toFixed(1)}` : v.toPrecision(6);
    ctx.fillText(label, 2, pad.t + h - (h * i) / 4 + 4);
  }
  ctx.fillText(String(x0), pad.l, pad.t + h + 15);
  ctx.fillText(String(x1), pad.l + w - 20, pad.t + h + 15);
  return { ctx, px, py, pad, w, h };
}

function line(canvas, xs, ys, opts) {
  const { ctx, px, py } = frame(canvas, xs, ys, opts);
  ctx.strokeStyle = "#1f4e9c";
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(ys[i])) : ctx.moveTo(px(x), py(ys[i]))));
  ctx.stroke();
}

function bars(canvas, values, reference) {
  const xs = values.map((_, i) => i);
  const { ctx, px, py, w } = frame(canvas, xs, [0, ...values, ...reference]);
  const half = (0.35 * w) / Math.max(values.length, 1);
  values.forEach((v, i) => {
    ctx.fillStyle = "rgba(230,126,34,0.7)";
    ctx.fillRect(px(i) - half, py(v), 2 * half, py(0) - py(v));
    ctx.fillStyle = "#000";
    ctx.beginPath();
    ctx.arc(px(i), py(reference[i]), 4, 0, 2 * Math.PI);
    ctx.fill();
  });
}

function guard(out, f) {
  try {
    f();
  } catch (e) {
    if (out) out.textContent = `error: ${e.message ?? e}`;
    else alert(e.message ?? e);
  }
}

await init();

$("sweep").onclick = () => guard($("sweep-out"), () => {
  const rows = JSON.parse(trotter_sweep(num("re"), num("im"), num("qubits"), num("mmin"), num("mmax")));
  line($("sweep-plot"), rows.map((r) => r.m), rows.map((r) => r.fidelity));
  $("sweep-out").textContent = rows.map((r) => `M=${r.m}  F=${r.fidelity.toFixed(6)}`).join("\n");
});

$("dist").onclick = () => guard(null, () => {
  const rows = JSON.parse(fock_distribution(num("re"), num("im"), num("qubits"), num("steps")));
  bars($("dist-plot"), rows.map((r) => r.probability), rows.map((r) => r.poisson_reference));
});

$("train").onclick = () => guard($("train-out"), () => {
  $("train-out").textContent = "training…";
  setTimeout(() => guard($("train-out"), () => {
    const r = JSON.parse(train_ansatz($("scheme").value, num("qubits"), num("layers"), num("re"), num("im"), num("maxit")));
    const trace = r.cost_trace;
    line($("train-plot"), trace.map((_, i) => i), trace, { logY: true });
    $("train-out").textContent =
      `scheme ${r.scheme}, ${r.layers} layers: ${r.params} parameters, ${r.single_qubit} single-qubit gates, ${r.cnot} CNOTs\n` +
      `F = ${r.final_fidelity.toFixed(6)} after ${r.iterations} iterations (${r.converged ? "converged" : "not converged"})`;
  }), 10);
});
