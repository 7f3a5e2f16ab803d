import init, { compressImage, pivotalPoints, maxvolTrace } from "./pkg/crossmax_web.js";

const $ = (id) => document.getElementById(id);

function fail(el, e) {
  el.textContent = String(e);
  el.className = "stat err";
}

// ---- image compression

let gray = null;

function syntheticImage(w, h) {
  const px = new Uint8Array(w * h);
  for (let y = 0; y < h; y++) {
    for (let x = 0; x < w; x++) {
      const u = x / w, v = y / h;
      const r = Math.hypot(u - 0.5, v - 0.5);
      px[y * w + x] = 128 + 100 * Math.sin(18 * r) * Math.exp(-3 * r) + 20 * Math.cos(9 * u) * Math.sin(7 * v);
    }
  }
  return { w, h, px };
}

function drawGray(canvas, w, h, px) {
  canvas.width = w;
  canvas.height = h;
  const ctx = canvas.getContext("2d");
  const data = ctx.createImageData(w, h);
  for (let i = 0; i < w * h; i++) {
    data.data.set([px[i], px[i], px[i], 255], 4 * i);
  }
  ctx.putImageData(data, 0, 0);
}

function loadFile(file) {
  const img = new Image();
  img.onload = () => {
    const scale = Math.min(1, 256 / Math.max(img.width, img.height));
    const w = Math.round(img.width * scale), h = Math.round(img.height * scale);
    const c = document.createElement("canvas");
    c.width = w;
    c.height = h;
    const ctx = c.getContext("2d");
    ctx.drawImage(img, 0, 0, w, h);
    const rgba = ctx.getImageData(0, 0, w, h).data;
    const px = new Uint8Array(w * h);
    for (let i = 0; i < w * h; i++) {
      px[i] = Math.round(0.299 * rgba[4 * i] + 0.587 * rgba[4 * i + 1] + 0.114 * rgba[4 * i + 2]);
    }
    setImage({ w, h, px });
  };
  img.src = URL.createObjectURL(file);
}

function setImage(g) {
  gray = g;
  $("img-rank").max = Math.min(g.w, g.h);
  drawGray($("img-src"), g.w, g.h, g.px);
  recompress();
}

function recompress() {
  const rank = Number($("img-rank").value);
  $("img-rank-out").textContent = rank;
  const stat = $("img-stat");
  stat.className = "stat";
  try {
    const t = performance.now();
    const r = compressImage(gray.w, gray.h, gray.px, rank, Number($("img-h").value));
    drawGray($("img-dst"), gray.w, gray.h, r.pixels);
    const db = r.psnr === Infinity ? "inf" : r.psnr.toFixed(2);
    stat.textContent = `rank ${r.rank}: PSNR ${db} dB, stores ${(100 * r.ratio).toFixed(1)}% of the pixels (${(performance.now() - t).toFixed(0)} ms)`;
    r.free();
  } catch (e) {
    fail(stat, e);
  }
}

// ---- pivotal samples

function plotPoints() {
  const stat = $("lsq-stat");
  stat.className = "stat";
  const canvas = $("lsq-plot");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  try {
    const v = pivotalPoints($("lsq-fn").value, Number($("lsq-deg").value), 51);
    const pad = 10, s = (canvas.width - 2 * pad) / 2;
    ctx.strokeStyle = "#ddd";
    ctx.strokeRect(pad, pad, 2 * s, 2 * s);
    ctx.fillStyle = "#c33";
    for (let i = 0; i + 1 < v.length - 1; i += 2) {
      ctx.beginPath();
      ctx.arc(pad + (v[i] + 1) * s, pad + (1 - v[i + 1]) * s, 3, 0, 2 * Math.PI);
      ctx.fill();
    }
    stat.textContent = `${(v.length - 1) / 2} pivotal samples of 51² grid, relative error ${v[v.length - 1].toExponential(2)}`;
  } catch (e) {
    fail(stat, e);
  }
}

// ---- volume traces

function plotTraces() {
  const stat = $("tr-stat");
  stat.className = "stat";
  const canvas = $("tr-plot");
  const ctx = canvas.getContext("2d");
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const n = Number($("tr-n").value), r = Number($("tr-r").value), seed = BigInt($("tr-seed").value);
  try {
    const runs = [1, 2, 4].map((h) => ({ h, t: Array.from(maxvolTrace(n, r, h, seed)) }));
    const all = runs.flatMap((x) => x.t);
    const lo = Math.min(...all), hi = Math.max(...all);
    const len = Math.max(...runs.map((x) => x.t.length));
    const colors = { 1: "#333", 2: "#27c", 4: "#c33" };
    const pad = 20, w = canvas.width - 2 * pad, h = canvas.height - 2 * pad;
    for (const { h: g, t } of runs) {
      ctx.strokeStyle = colors[g];
      ctx.beginPath();
      t.forEach((y, i) => {
        const px = pad + (w * i) / Math.max(1, len - 1), py = pad + h * (1 - (y - lo) / (hi - lo || 1));
        i ? ctx.lineTo(px, py) : ctx.moveTo(px, py);
      });
      ctx.stroke();
    }
    stat.textContent = runs.map((x) => `h=${x.h}: ${x.t.length - 1} swaps, ln|det| ${x.t[x.t.length - 1].toFixed(2)}`).join("; ");
  } catch (e) {
    fail(stat, e);
  }
}

await init();
$("img-file").addEventListener("change", (e) => e.target.files[0] && loadFile(e.target.files[0]));
$("img-rank").addEventListener("input", recompress);
$("img-h").addEventListener("change", recompress);
$("lsq-run").addEventListener("click", plotPoints);
$("tr-run").addEventListener("click", plotTraces);
setImage(syntheticImage(192, 192));
plotPoints();
plotTraces();
