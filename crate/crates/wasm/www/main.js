import init, { sweep, solve, Game } from "./pkg/noisy_games_wasm.js";

const $ = (id) => document.getElementById(id);
const fmt = (x) => x.toFixed(6);
const palette = ["#357", "#c60", "#0a6", "#a2a", "#b00", "#08c", "#870", "#555"];

function fail(el, e) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "error";
  p.textContent = String(e.message ?? e);
  el.append(p);
}

function curveSpec() {
  if ($("curve-game").value === "nim1") {
    return { family: "nim1", k: +$("curve-k").value, p: 0 };
  }
  return { family: "chomp", n: +$("curve-n").value, m: +$("curve-m").value, variant: $("curve-variant").value, p: 0 };
}

function plotCurve() {
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  let rows;
  try {
    rows = JSON.parse(sweep(JSON.stringify(curveSpec()), +$("curve-points").value));
  } catch (e) {
    return fail($("curve-info"), e);
  }
  const [w, h, pad] = [canvas.width, canvas.height, 30];
  const x = (p) => pad + p * (w - 2 * pad);
  const y = (v) => h - pad - v * (h - 2 * pad);
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(x(0), y(0.5));
  ctx.lineTo(x(1), y(0.5));
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#333";
  ctx.fillText("0", pad - 10, h - pad + 12);
  ctx.fillText("p", w - pad, h - pad + 20);
  ctx.fillText("1", pad - 12, pad + 4);
  ctx.fillText("1/2", pad - 24, y(0.5) + 4);
  // Points are coloured by the smallest optimal move.
  const moves = [...new Set(rows.map((r) => r.optimal_moves[0]))].sort((a, b) => a - b);
  for (let i = 1; i < rows.length; i++) {
    const [a, b] = [rows[i - 1], rows[i]];
    ctx.strokeStyle = palette[moves.indexOf(b.optimal_moves[0]) % palette.length];
    ctx.beginPath();
    ctx.moveTo(x(a.p), y(a.value));
    ctx.lineTo(x(b.p), y(b.value));
    ctx.stroke();
  }
  const legend = moves.map((m, i) => `<span style="color:${palette[i % palette.length]}">move ${m}</span>`).join(" ");
  const min = rows.reduce((best, r) => (r.value < best.value ? r : best));
  $("curve-info").innerHTML = `${legend} &middot; minimum ${fmt(min.value)} at p = ${min.p}`;
}

function solveSpec() {
  const out = $("solve-out");
  let listing;
  try {
    listing = JSON.parse(solve($("solve-spec").value));
  } catch (e) {
    return fail(out, e);
  }
  const table = document.createElement("table");
  table.innerHTML = "<tr><th>position</th><th>class</th><th>value</th><th>moves (optimal in bold)</th></tr>";
  for (const pos of listing.positions) {
    const tr = table.insertRow();
    const moves = pos.move_labels
      .map((l, i) => `<span class="${pos.optimal_moves.includes(i) ? "opt" : ""}">${l}: ${fmt(pos.move_values[i])}</span>`)
      .join("<br>");
    tr.innerHTML = `<td>${pos.label}${pos.id === listing.start ? " (start)" : ""}</td><td>${pos.class}</td><td>${fmt(pos.value)}</td><td>${moves}</td>`;
  }
  out.replaceChildren(table);
}

let game = null;

function describe(half) {
  const moved = half.sent === half.landed ? half.sent_label : `${half.sent_label}, landed ${half.landed_label}`;
  return `${half.player}: ${moved}`;
}

function render(state) {
  const board = $("board");
  board.innerHTML = "";
  const status = document.createElement("p");
  status.textContent =
    state.status.state === "finished"
      ? `${state.status.winner} wins`
      : `${state.to_move} to move; winning chance for the mover ${fmt(state.position_value)}`;
  board.append(status);
  const hint = state.status.state === "live" && $("play-hints").checked ? JSON.parse(game.hint()) : null;
  const view = state.position;
  if (view.kind === "chomp") {
    const grid = document.createElement("div");
    for (let r = view.rows - 1; r >= 0; r--) {
      const line = document.createElement("div");
      for (let c = 0; c < view.cols; c++) {
        const cell = document.createElement("button");
        cell.className = "cell" + (c === 0 && r === 0 ? " poison" : "") + (r >= view.heights[c] ? " gone" : "");
        const index = view.move_cells.findIndex(([mc, mr]) => mc === c && mr === r);
        if (index >= 0) {
          cell.title = state.move_labels[index] + (hint ? ` (${fmt(hint.move_values[index])})` : "");
          if (hint?.optimal_moves.includes(index)) cell.style.outline = "3px solid #0a6";
          cell.onclick = () => play(index);
        } else {
          cell.disabled = true;
        }
        line.append(cell);
      }
      grid.append(line);
    }
    board.append(grid);
  } else {
    if (view.kind === "heap") {
      const heap = document.createElement("div");
      heap.className = "heap";
      heap.innerHTML = "<span></span>".repeat(view.chips);
      board.append(heap);
    }
    state.move_labels.forEach((label, i) => {
      const b = document.createElement("button");
      b.textContent = hint ? `${label} (${fmt(hint.move_values[i])})` : label;
      if (hint?.optimal_moves.includes(i)) b.className = "opt";
      b.disabled = state.status.state !== "live";
      b.onclick = () => play(i);
      board.append(b);
    });
  }
  $("history").innerHTML = state.history.map((h) => `<li>${describe(h)}</li>`).join("");
}

function play(index) {
  try {
    render(JSON.parse(game.play(index)).state);
  } catch (e) {
    fail($("board"), e);
  }
}

function newGame() {
  try {
    game?.free();
    game = new Game($("play-spec").value, +$("play-seed").value, $("play-first").checked);
    render(JSON.parse(game.state()));
  } catch (e) {
    game = null;
    fail($("board"), e);
  }
}

await init();
$("curve-run").onclick = plotCurve;
$("solve-run").onclick = solveSpec;
$("play-new").onclick = newGame;
$("play-hints").onchange = () => game && render(JSON.parse(game.state()));
plotCurve();
solveSpec();
newGame();
