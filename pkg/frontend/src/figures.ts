import * as fs from "fs";
import * as path from "path";

import { ExperimentRow, readExperimentCsv, readGossipCsv } from "./csv";
import { ChartOptions, Series, renderChart } from "./svg";

export type FigureId = "error-rate" | "iterations" | "scaling";

export const FIGURE_IDS: FigureId[] = ["error-rate", "iterations", "scaling"];

export interface FigureSpec {
    figure: FigureId;
    inputs: string[];
    output: string;
}

function seriesLabel(row: ExperimentRow): string {
    if (!row.correction) return "no EC";
    return `EC tau=${row.termination_parameter}`;
}

// stable grouping: the uncorrected scheme first, then by rising tau
function groupByScheme(rows: ExperimentRow[]): Map<string, ExperimentRow[]> {
    const order = (row: ExperimentRow) =>
        row.correction ? 1 + (row.termination_parameter ?? 0) : 0;
    const sorted = [...rows].sort((a, b) =>
        order(a) - order(b) || a.noise_power - b.noise_power);
    const groups = new Map<string, ExperimentRow[]>();
    for (const row of sorted) {
        const label = seriesLabel(row);
        if (!groups.has(label)) groups.set(label, []);
        groups.get(label)!.push(row);
    }
    return groups;
}

function sweepSeries(rows: ExperimentRow[], value: (row: ExperimentRow) => number): Series[] {
    const series: Series[] = [];
    for (const [label, group] of groupByScheme(rows)) {
        const points = group
            .map(row => [row.noise_power, value(row)] as [number, number])
            .filter(([, v]) => !Number.isNaN(v));
        if (points.length === 0) {
            throw new Error(`series ${label} has no plottable points`);
        }
        series.push({ label, points });
    }
    return series;
}

function errorRateChart(rows: ExperimentRow[]): ChartOptions {
    return {
        figure: "error-rate",
        title: "Error rate vs noise power",
        xLabel: "noise power [dB]",
        yLabel: "error rate",
        yScale: "log",
        xRange: [-5.5, 15.5],
        yRange: [5e-4, 1],
        series: sweepSeries(rows, row => 1 - row.success_rate),
    };
}

function iterationsChart(rows: ExperimentRow[]): ChartOptions {
    return {
        figure: "iterations",
        title: "Iterations in successful runs vs noise power",
        xLabel: "noise power [dB]",
        yLabel: "mean iterations",
        yScale: "linear",
        xRange: [-5.5, 15.5],
        series: sweepSeries(rows, row => row.average_iterations_in_successful_runs),
    };
}

function scalingChart(ecPath: string, gossipPath: string): ChartOptions {
    const ec = readExperimentCsv(ecPath);
    const gossip = readGossipCsv(gossipPath);

    const groups = new Map<string, Series>();
    for (const row of [...ec].sort((a, b) =>
        a.noise_power - b.noise_power || a.agents - b.agents)) {
        const label = `EC tau=${row.termination_parameter} @ ${row.noise_power} dB`;
        if (!groups.has(label)) {
            groups.set(label, { label, points: [], axis: "left" });
        }
        groups.get(label)!.points.push(
            [row.agents, row.average_iterations_in_successful_runs]);
    }
    const series = [...groups.values()];
    series.push({
        label: "RB",
        axis: "right",
        points: gossip.map(row => [row.agents, row.RB]),
    });
    series.push({
        label: "RP",
        axis: "right",
        points: gossip.map(row => [row.agents, row.RP]),
    });
    return {
        figure: "scaling",
        title: "Iterations vs network size",
        xLabel: "agents",
        yLabel: "WMAC scheme iterations",
        yScale: "linear",
        rightLabel: "gossip iterations",
        rightScale: "linear",
        series,
    };
}

export function buildChart(spec: FigureSpec): ChartOptions {
    if (spec.figure === "scaling") {
        if (spec.inputs.length !== 2) {
            throw new Error("scaling needs two inputs: the EC CSV and the RB/RP CSV");
        }
        return scalingChart(spec.inputs[0], spec.inputs[1]);
    }
    if (spec.inputs.length !== 1) {
        throw new Error(`${spec.figure} takes exactly one input CSV`);
    }
    const rows = readExperimentCsv(spec.inputs[0]);
    return spec.figure === "error-rate"
        ? errorRateChart(rows)
        : iterationsChart(rows);
}

export function render(spec: FigureSpec): string {
    const svg = renderChart(buildChart(spec));
    fs.mkdirSync(path.dirname(path.resolve(spec.output)), { recursive: true });
    fs.writeFileSync(spec.output, svg);
    return spec.output;
}
