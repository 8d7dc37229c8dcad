#!/usr/bin/env node
import { FIGURE_IDS, FigureId, FigureSpec, render } from "./figures";

const USAGE = `usage: figures <${FIGURE_IDS.join("|")}> --in <csv> [--in <csv>] --out <svg>

error-rate   error rate vs noise power (log y), from a noise-sweep CSV
iterations   mean iterations vs noise power, from the same CSV
scaling      iterations vs network size, dual axis; takes the EC scaling
             CSV first and the RB/RP CSV second`;

export function parseArgs(argv: string[]): FigureSpec {
    const [figure, ...rest] = argv;
    if (!figure || !FIGURE_IDS.includes(figure as FigureId)) {
        throw new Error(`unknown figure id ${JSON.stringify(figure ?? "")}`);
    }
    const inputs: string[] = [];
    let output: string | null = null;
    for (let i = 0; i < rest.length; i++) {
        const flag = rest[i];
        const value = rest[i + 1];
        if (flag === "--in" && value) {
            inputs.push(value);
            i++;
        } else if (flag === "--out" && value) {
            output = value;
            i++;
        } else {
            throw new Error(`unexpected argument ${JSON.stringify(flag)}`);
        }
    }
    if (inputs.length === 0) throw new Error("at least one --in CSV is required");
    if (!output) throw new Error("--out is required");
    return { figure: figure as FigureId, inputs, output };
}

export function main(argv: string[]): number {
    try {
        const spec = parseArgs(argv);
        console.log(render(spec));
        return 0;
    } catch (error) {
        console.error(`error: ${(error as Error).message}`);
        console.error(USAGE);
        return 2;
    }
}

if (require.main === module) {
    process.exit(main(process.argv.slice(2)));
}
