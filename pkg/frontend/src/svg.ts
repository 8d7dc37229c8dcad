// Minimal hand-rolled SVG line charts.  Every produced file embeds a
// machine-readable <metadata> JSON block describing the figure, so scripts
// can verify what was drawn without rasterizing anything.

export type Scale = "linear" | "log";

export interface Series {
    label: string;
    points: Array<[number, number]>;
    axis?: "left" | "right";
}

export interface ChartOptions {
    figure: string;
    title: string;
    xLabel: string;
    yLabel: string;
    yScale: Scale;
    series: Series[];
    xRange?: [number, number];
    yRange?: [number, number];
    rightLabel?: string;
    rightScale?: Scale;
    rightRange?: [number, number];
}

const WIDTH = 800;
const HEIGHT = 520;
const MARGIN = { top: 48, right: 76, bottom: 56, left: 76 };

const PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

function extent(values: number[], kind: Scale = "linear"): [number, number] {
    let lo = Infinity, hi = -Infinity;
    for (const v of values) {
        if (!Number.isFinite(v)) continue;
        // zeros cannot appear on a log axis; they are pinned to the floor later
        if (kind === "log" && v <= 0) continue;
        if (v < lo) lo = v;
        if (v > hi) hi = v;
    }
    if (lo > hi) throw new Error("empty series: nothing to draw");
    if (lo === hi) {
        if (kind === "log") { lo /= 2; hi *= 2; }
        else { lo -= 0.5; hi += 0.5; }
    }
    return [lo, hi];
}

// defaults act as a floor; data outside them widens the range
function mergeRange(auto: [number, number], preset?: [number, number]): [number, number] {
    if (!preset) return auto;
    return [Math.min(auto[0], preset[0]), Math.max(auto[1], preset[1])];
}

function rangeFor(values: number[], kind: Scale, preset?: [number, number]): [number, number] {
    try {
        return mergeRange(extent(values, kind), preset);
    } catch (error) {
        // e.g. a log axis over all-zero data: fall back to the preset range
        if (preset) return preset;
        throw error;
    }
}

function makeScale(range: [number, number], pixels: [number, number], kind: Scale) {
    const [lo, hi] = kind === "log"
        ? [Math.log10(range[0]), Math.log10(range[1])]
        : range;
    return (value: number) => {
        const v = kind === "log" ? Math.log10(value) : value;
        const t = (v - lo) / (hi - lo);
        return pixels[0] + t * (pixels[1] - pixels[0]);
    };
}

function linearTicks(lo: number, hi: number, count = 6): number[] {
    const span = hi - lo;
    const step = Math.pow(10, Math.floor(Math.log10(span / count)));
    const err = span / count / step;
    const mult = err >= 7.5 ? 10 : err >= 3.5 ? 5 : err >= 1.5 ? 2 : 1;
    const s = step * mult;
    const ticks = [];
    for (let v = Math.ceil(lo / s) * s; v <= hi + 1e-9 * s; v += s) {
        ticks.push(Math.abs(v) < 1e-12 ? 0 : v);
    }
    return ticks;
}

function logTicks(lo: number, hi: number): number[] {
    if (lo <= 0) throw new Error("log axis range must be positive");
    const ticks = [];
    for (let e = Math.ceil(Math.log10(lo) - 1e-9); Math.pow(10, e) <= hi * (1 + 1e-9); e++) {
        ticks.push(Math.pow(10, e));
    }
    return ticks;
}

function formatTick(value: number, kind: Scale): string {
    if (kind === "log") {
        const e = Math.log10(value);
        if (Number.isInteger(e) && (e < -3 || e > 4)) return `1e${e}`;
    }
    if (Math.abs(value) >= 10000) return value.toExponential(0);
    return `${Math.round(value * 1000) / 1000}`;
}

function esc(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderChart(options: ChartOptions): string {
    if (options.series.length === 0) throw new Error("no series to draw");
    const left = options.series.filter(s => (s.axis ?? "left") === "left");
    const right = options.series.filter(s => s.axis === "right");
    if (left.length === 0) throw new Error("left axis needs at least one series");

    const plotX: [number, number] = [MARGIN.left, WIDTH - MARGIN.right];
    const plotY: [number, number] = [HEIGHT - MARGIN.bottom, MARGIN.top];

    const xs = options.series.flatMap(s => s.points.map(p => p[0]));
    const xRange = mergeRange(extent(xs), options.xRange);
    const x = makeScale(xRange, plotX, "linear");

    const yRange = rangeFor(
        left.flatMap(s => s.points.map(p => p[1])), options.yScale, options.yRange);
    const y = makeScale(yRange, plotY, options.yScale);

    let yRight: ((v: number) => number) | null = null;
    let rightRange: [number, number] = [0, 1];
    const rightScale = options.rightScale ?? "linear";
    if (right.length > 0) {
        rightRange = rangeFor(
            right.flatMap(s => s.points.map(p => p[1])), rightScale, options.rightRange);
        yRight = makeScale(rightRange, plotY, rightScale);
    }

    const parts: string[] = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`);

    const meta = {
        figure: options.figure,
        seriesCount: options.series.length,
        series: options.series.map(s => ({
            label: s.label,
            axis: s.axis ?? "left",
            points: s.points.length,
        })),
        xLabel: options.xLabel,
        yLabel: options.yLabel,
        yScale: options.yScale,
        xRange,
        yRange,
        ...(right.length > 0
            ? { rightLabel: options.rightLabel, rightScale, rightRange }
            : {}),
    };
    parts.push(`<metadata id="chart-meta">${esc(JSON.stringify(meta))}</metadata>`);

    parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
    parts.push(`<text x="${WIDTH / 2}" y="26" text-anchor="middle" font-size="16">${esc(options.title)}</text>`);

    // frame and gridlines
    parts.push(`<rect x="${plotX[0]}" y="${plotY[1]}" width="${plotX[1] - plotX[0]}" height="${plotY[0] - plotY[1]}" fill="none" stroke="#333"/>`);
    for (const tick of linearTicks(xRange[0], xRange[1])) {
        const px = x(tick);
        parts.push(`<line x1="${px}" y1="${plotY[0]}" x2="${px}" y2="${plotY[0] + 5}" stroke="#333"/>`);
        parts.push(`<text x="${px}" y="${plotY[0] + 20}" text-anchor="middle" font-size="11">${formatTick(tick, "linear")}</text>`);
    }
    const yTicks = options.yScale === "log"
        ? logTicks(yRange[0], yRange[1])
        : linearTicks(yRange[0], yRange[1]);
    for (const tick of yTicks) {
        const py = y(tick);
        parts.push(`<line x1="${plotX[0]}" y1="${py}" x2="${plotX[1]}" y2="${py}" stroke="#ddd"/>`);
        parts.push(`<line x1="${plotX[0] - 5}" y1="${py}" x2="${plotX[0]}" y2="${py}" stroke="#333"/>`);
        parts.push(`<text x="${plotX[0] - 8}" y="${py + 4}" text-anchor="end" font-size="11">${formatTick(tick, options.yScale)}</text>`);
    }
    if (yRight) {
        const ticks = rightScale === "log"
            ? logTicks(rightRange[0], rightRange[1])
            : linearTicks(rightRange[0], rightRange[1]);
        for (const tick of ticks) {
            const py = yRight(tick);
            parts.push(`<line x1="${plotX[1]}" y1="${py}" x2="${plotX[1] + 5}" y2="${py}" stroke="#333"/>`);
            parts.push(`<text x="${plotX[1] + 8}" y="${py + 4}" font-size="11">${formatTick(tick, rightScale)}</text>`);
        }
    }

    // axis titles
    parts.push(`<text x="${(plotX[0] + plotX[1]) / 2}" y="${HEIGHT - 14}" text-anchor="middle" font-size="13">${esc(options.xLabel)}</text>`);
    parts.push(`<text transform="rotate(-90 20 ${(plotY[0] + plotY[1]) / 2})" x="20" y="${(plotY[0] + plotY[1]) / 2}" text-anchor="middle" font-size="13">${esc(options.yLabel)}</text>`);
    if (yRight && options.rightLabel) {
        parts.push(`<text transform="rotate(90 ${WIDTH - 16} ${(plotY[0] + plotY[1]) / 2})" x="${WIDTH - 16}" y="${(plotY[0] + plotY[1]) / 2}" text-anchor="middle" font-size="13">${esc(options.rightLabel)}</text>`);
    }

    // data
    options.series.forEach((series, index) => {
        const color = PALETTE[index % PALETTE.length];
        const scaleY = series.axis === "right" && yRight ? yRight : y;
        const floor = series.axis === "right" ? rightRange[0] : yRange[0];
        const coords = series.points.map(([px, py]) => {
            // log axes cannot show zero; pin such points to the axis floor
            const value = (scaleY === y ? options.yScale : rightScale) === "log" && py <= 0
                ? floor : py;
            return `${x(px).toFixed(1)},${scaleY(value).toFixed(1)}`;
        });
        parts.push(`<polyline class="series" fill="none" stroke="${color}" stroke-width="1.8" points="${coords.join(" ")}"/>`);
        for (const pair of coords) {
            const [cx, cy] = pair.split(",");
            parts.push(`<circle cx="${cx}" cy="${cy}" r="2.6" fill="${color}"/>`);
        }
    });

    // legend
    options.series.forEach((series, index) => {
        const color = PALETTE[index % PALETTE.length];
        const lx = plotX[0] + 12;
        const ly = plotY[1] + 16 + index * 16;
        parts.push(`<line x1="${lx}" y1="${ly - 4}" x2="${lx + 22}" y2="${ly - 4}" stroke="${color}" stroke-width="2"/>`);
        parts.push(`<text x="${lx + 28}" y="${ly}" font-size="12">${esc(series.label)}</text>`);
    });

    parts.push("</svg>");
    return parts.join("\n");
}
