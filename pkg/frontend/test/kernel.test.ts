import { readFileSync } from "node:fs"
import { fileURLToPath } from "node:url"
import { dirname, join } from "node:path"
import { describe, expect, it } from "vitest"
import { KernelClient } from "../src/client.js"

const ROOT = join(dirname(fileURLToPath(import.meta.url)), "..", "..")

describe("kernel client", () => {
  it("inverts the geometric series", () => {
    const client = new KernelClient({ cwd: ROOT })
    expect(client.invertSeries("1 - t1", 4)).toBe("1 + t1 + t1^2 + t1^3 + O(t1^4)")
  })

  it("validates series before spawning", () => {
    const client = new KernelClient({ cwd: ROOT, depth: 1 })
    expect(() => client.evalSeries("t9")).toThrow()
  })

  it("reads valuations as vectors", () => {
    const client = new KernelClient({ cwd: ROOT, field: "5", depth: 2 })
    expect(client.valuation("t2^2*t1^-1")).toEqual([-1, 2])
  })

  it("parses the witness line into a typed record", () => {
    const client = new KernelClient({ cwd: ROOT, field: "5", depth: 2 })
    const w = client.witness(0)
    expect(w).toEqual({ x: "t2^-2*t1^-1", image: "t2^-2*t1^-3", level: 0 })
  })

  it("runs the randomized double-dual trials", () => {
    const client = new KernelClient({ cwd: ROOT, seed: 1, trials: 20 })
    expect(client.doubleDualTrials()).toEqual({ passed: 20, total: 20 })
  })

  it("computes adelic quotient dimensions", () => {
    const client = new KernelClient({ cwd: ROOT, field: "2" })
    expect(client.quotientDim("[(t^2+t+1):1]", "[]")).toBe(2)
  })

  it("answers membership with exit semantics", () => {
    const client = new KernelClient({ cwd: ROOT, field: "2" })
    expect(client.membership("1/(t+1)", "[(t+1):1]")).toBe(true)
    expect(client.membership("1/(t+1)", "[]")).toBe(false)
  })

  it("expands local functions in the uniformizer", () => {
    const client = new KernelClient({ cwd: ROOT, field: "2" })
    expect(client.localExpansion("t", "inf", 4)).toBe("u^-1 + O(u^4)")
  })

  it("applies operator literals", () => {
    const client = new KernelClient({ cwd: ROOT, field: "5" })
    expect(client.applyOperator("mul(t1)", "t1^-1 + 1 + O(t1^2)")).toBe("1 + t1 + O(t1^3)")
  })

  it("surfaces kernel errors as structured replies", () => {
    const client = new KernelClient({ cwd: ROOT, field: "4" })
    const reply = client.run(["series", "eval", "1"])
    expect(reply.ok).toBe(false)
    expect(reply.exitCode).toBe(2)
    expect(reply.lines[0]).toContain("not prime")
  })
})

describe("golden session", () => {
  it("matches the frozen transcript and is byte-stable", () => {
    const client = new KernelClient({ cwd: ROOT })
    const script = join(ROOT, "tests", "golden", "session.txt")
    const first = client.runText(["script", script])
    const second = client.runText(["script", script])
    expect(first.exitCode).toBe(0)
    expect(second.lines).toEqual(first.lines)
    const expected = readFileSync(join(ROOT, "tests", "golden", "session.expected.txt"), "utf-8")
      .replace(/\n$/, "")
      .split("\n")
      .slice(1) // drop the version header, runText already strips it
    expect(first.lines).toEqual(expected)
  })
})
