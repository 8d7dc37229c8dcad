import * as fs from "fs";

export interface ExperimentRow {
    agents: number;
    m: number;
    noise_power: number;
    correction: boolean;
    termination_parameter: number | null;
    runs: number;
    success_rate: number;
    average_iterations_in_successful_runs: number;
    average_survivor_count: number;
    timeout_rate: number;
    base_seed: number;
}

export const EXPERIMENT_COLUMNS = [
    "agents", "m", "noise_power", "correction", "termination_parameter",
    "runs", "success_rate", "average_iterations_in_successful_runs",
    "average_survivor_count", "timeout_rate", "base_seed",
];

// the harness never quotes or embeds commas, so a plain split is exact
function parseTable(path: string): { header: string[]; rows: string[][] } {
    const text = fs.readFileSync(path, "utf-8").trim();
    if (text === "") throw new Error(`empty CSV: ${path}`);
    const lines = text.split(/\r?\n/);
    const header = lines[0].split(",");
    const rows = lines.slice(1).map(line => line.split(","));
    for (const row of rows) {
        if (row.length !== header.length) {
            throw new Error(`ragged row in ${path}: ${row.join(",")}`);
        }
    }
    return { header, rows };
}

function toNumber(cell: string, column: string): number {
    if (cell === "-inf") return -Infinity;
    const value = Number(cell);
    if (Number.isNaN(value) && cell !== "nan") {
        throw new Error(`bad number ${JSON.stringify(cell)} in column ${column}`);
    }
    return value;
}

export function readExperimentCsv(path: string): ExperimentRow[] {
    const { header, rows } = parseTable(path);
    for (const column of EXPERIMENT_COLUMNS) {
        if (!header.includes(column)) {
            throw new Error(`missing column ${column} in ${path}`);
        }
    }
    if (rows.length === 0) throw new Error(`no data rows in ${path}`);
    const at = (row: string[], column: string) => row[header.indexOf(column)];
    return rows.map(row => ({
        agents: toNumber(at(row, "agents"), "agents"),
        m: toNumber(at(row, "m"), "m"),
        noise_power: toNumber(at(row, "noise_power"), "noise_power"),
        correction: at(row, "correction") === "True",
        termination_parameter: at(row, "termination_parameter") === ""
            ? null
            : toNumber(at(row, "termination_parameter"), "termination_parameter"),
        runs: toNumber(at(row, "runs"), "runs"),
        success_rate: toNumber(at(row, "success_rate"), "success_rate"),
        average_iterations_in_successful_runs: toNumber(
            at(row, "average_iterations_in_successful_runs"),
            "average_iterations_in_successful_runs"),
        average_survivor_count: toNumber(
            at(row, "average_survivor_count"), "average_survivor_count"),
        timeout_rate: toNumber(at(row, "timeout_rate"), "timeout_rate"),
        base_seed: toNumber(at(row, "base_seed"), "base_seed"),
    }));
}

export interface GossipRow {
    agents: number;
    RB: number;
    RP: number;
}

export function readGossipCsv(path: string): GossipRow[] {
    const { header, rows } = parseTable(path);
    for (const column of ["agents", "RB", "RP"]) {
        if (!header.includes(column)) {
            throw new Error(`missing column ${column} in ${path}`);
        }
    }
    if (rows.length === 0) throw new Error(`no data rows in ${path}`);
    const at = (row: string[], column: string) => row[header.indexOf(column)];
    return rows.map(row => ({
        agents: toNumber(at(row, "agents"), "agents"),
        RB: toNumber(at(row, "RB"), "RB"),
        RP: toNumber(at(row, "RP"), "RP"),
    }));
}
