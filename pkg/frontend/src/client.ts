/**
 * Typed client for the fieldtower kernel CLI.
 *
 * Talks to the kernel exclusively through its public command surface:
 * expression strings in, the versioned JSON output document back.
 */

import { execFileSync } from "node:child_process"
import { GrammarError, parseDivisor, parseSeries } from "./grammar.js"

export interface SessionOptions {
  python?: string
  /** repository root containing the installed kernel package */
  cwd?: string
  field?: string
  depth?: number
  prec?: number
  seed?: number
  trials?: number
}

export interface KernelReply {
  version: string
  ok: boolean
  lines: string[]
  exitCode: number
}

const EXPECTED_VERSION = "fieldtower.v1"

export class KernelClient {
  constructor(readonly opts: SessionOptions = {}) {}

  private sessionFlags(): string[] {
    const o = this.opts
    const flags: string[] = ["--format", "json"]
    if (o.field !== undefined) flags.push("--field", String(o.field))
    if (o.depth !== undefined) flags.push("--depth", String(o.depth))
    if (o.prec !== undefined) flags.push("--prec", String(o.prec))
    if (o.seed !== undefined) flags.push("--seed", String(o.seed))
    if (o.trials !== undefined) flags.push("--trials", String(o.trials))
    return flags
  }

  /** Run one kernel command; nonzero exits still return the parsed reply. */
  run(args: string[]): KernelReply {
    const python = this.opts.python ?? "python3"
    let stdout: string
    let exitCode = 0
    try {
      stdout = execFileSync(python, ["-m", "fieldtower.cli", ...this.sessionFlags(), ...args], {
        encoding: "utf-8",
        cwd: this.opts.cwd,
      })
    } catch (err) {
      const e = err as { status?: number; stdout?: Buffer | string }
      exitCode = e.status ?? 1
      stdout = (e.stdout ?? "").toString()
    }
    const text = stdout.replace(/\r\n/g, "\n")
    const newline = text.indexOf("\n")
    const header = newline === -1 ? text.trim() : text.slice(0, newline)
    if (header !== EXPECTED_VERSION) {
      throw new Error(`unexpected kernel output header: ${JSON.stringify(header)}`)
    }
    const body = newline === -1 ? "" : text.slice(newline + 1)
    const doc = JSON.parse(body) as { version: string; ok: boolean; lines: string[] }
    return { version: doc.version, ok: doc.ok, lines: doc.lines, exitCode }
  }

  /** Run a raw (text-mode) command, returning the payload lines verbatim. */
  runText(args: string[]): { lines: string[]; exitCode: number } {
    const python = this.opts.python ?? "python3"
    let stdout: string
    let exitCode = 0
    try {
      stdout = execFileSync(python, ["-m", "fieldtower.cli", ...args], {
        encoding: "utf-8",
        cwd: this.opts.cwd,
      })
    } catch (err) {
      const e = err as { status?: number; stdout?: Buffer | string }
      exitCode = e.status ?? 1
      stdout = (e.stdout ?? "").toString()
    }
    const lines = stdout.replace(/\r\n/g, "\n").replace(/\n$/, "").split("\n")
    if (lines[0] !== EXPECTED_VERSION) {
      throw new Error(`unexpected kernel output header: ${JSON.stringify(lines[0])}`)
    }
    return { lines: lines.slice(1), exitCode }
  }

  // ------------------------------------------------------------- commands

  /** Evaluate and normalize a series expression (validated client-side). */
  evalSeries(expr: string): string {
    parseSeries(expr, this.opts.depth ?? 1)
    return this.single(["series", "eval", expr])
  }

  invertSeries(expr: string, prec: number): string {
    parseSeries(expr, this.opts.depth ?? 1)
    return this.single(["series", "inv", expr, "--prec", String(prec)])
  }

  multiplySeries(a: string, b: string): string {
    parseSeries(a, this.opts.depth ?? 1)
    parseSeries(b, this.opts.depth ?? 1)
    return this.single(["series", "mul", a, b])
  }

  valuation(expr: string): number[] {
    const line = this.single(["series", "val", expr])
    return line
      .replace(/[()]/g, "")
      .split(",")
      .map((s) => Number(s.trim()))
  }

  applyOperator(op: string, series: string): string {
    return this.single(["endo", "apply", op, series])
  }

  witness(j: number): { x: string; image: string; level: number } {
    const line = this.single(["endo", "witness", "--j", String(j)])
    const m = /^x = (.*) ; phi\(x\) = (.*) ; not in E_(-?\d+)$/.exec(line)
    if (!m) throw new Error(`unrecognized witness line: ${line}`)
    return { x: m[1], image: m[2], level: Number(m[3]) }
  }

  doubleDualTrials(): { passed: number; total: number } {
    const line = this.single(["cn", "double-dual", "--random"])
    const m = /^(\d+)\/(\d+) pass$/.exec(line)
    if (!m) throw new Error(`unrecognized trial line: ${line}`)
    return { passed: Number(m[1]), total: Number(m[2]) }
  }

  quotientDim(d1: string, d2: string): number {
    parseDivisor(d1)
    parseDivisor(d2)
    return Number(this.single(["adele", "qdim", d1, d2]))
  }

  membership(func: string, divisor: string): boolean {
    parseDivisor(divisor)
    const reply = this.run(["adele", "member", func, divisor])
    return reply.lines[0] === "member"
  }

  localExpansion(func: string, point: string, prec: number): string {
    return this.single(["adele", "expand", func, "--at", point, "--prec", String(prec)])
  }

  private single(args: string[]): string {
    const reply = this.run(args)
    if (!reply.ok) {
      throw new Error(`kernel command failed: ${reply.lines.join(" | ")}`)
    }
    return reply.lines[0]
  }
}

export { GrammarError, parseDivisor, parseSeries }
export { printSeries } from "./grammar.js"
