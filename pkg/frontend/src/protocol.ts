/**
 * Wire frames for the chat relay.
 *
 * The relay speaks newline-delimited JSON over raw TCP and sends the same
 * objects as text messages over WebSocket; this client only uses the
 * WebSocket side. Frames it does not recognise are dropped by the caller
 * with a console diagnostic, never thrown on.
 */

export type Color = "RED" | "ORANGE";

export interface JoinFrame {
  type: "join";
  session: string;
  who: string;
}

export interface JoinedFrame {
  type: "joined";
  session: string;
  who: string;
}

/** A relayed chat line. `degraded` marks delivery despite a store failure. */
export interface MsgFrame {
  type: "msg";
  who: string;
  seq: number;
  text: string;
  degraded?: boolean;
}

/**
 * A detection result for the message with the same seq. `keyword` is the
 * display surface to highlight; `stem` is the canonical form the rule
 * matched on.
 */
export interface AlertFrame {
  type: "alert";
  seq: number;
  keyword: string;
  stem: string;
  label: string;
  color: Color;
}

export interface ErrorFrame {
  type: "error";
  code: string;
}

export type ServerFrame = JoinedFrame | MsgFrame | AlertFrame | ErrorFrame;

export function joinFrame(session: string, who: string): JoinFrame {
  return { type: "join", session, who };
}

export function msgFrame(text: string): { type: "msg"; text: string } {
  return { type: "msg", text };
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

/**
 * Parse one frame off the wire. Returns null for anything malformed:
 * non-JSON, missing fields, wrong field types, unknown frame types, or an
 * alert whose color is not RED/ORANGE. Callers log and move on.
 */
export function parseFrame(raw: string): ServerFrame | null {
  let value: unknown;
  try {
    value = JSON.parse(raw);
  } catch {
    return null;
  }
  if (!isRecord(value)) return null;

  switch (value.type) {
    case "joined":
      if (typeof value.session === "string" && typeof value.who === "string") {
        return { type: "joined", session: value.session, who: value.who };
      }
      return null;
    case "msg":
      if (
        typeof value.who === "string" &&
        typeof value.seq === "number" &&
        Number.isInteger(value.seq) &&
        typeof value.text === "string"
      ) {
        const frame: MsgFrame = {
          type: "msg",
          who: value.who,
          seq: value.seq,
          text: value.text,
        };
        if (value.degraded === true) frame.degraded = true;
        return frame;
      }
      return null;
    case "alert":
      if (
        typeof value.seq === "number" &&
        Number.isInteger(value.seq) &&
        typeof value.keyword === "string" &&
        typeof value.stem === "string" &&
        typeof value.label === "string" &&
        (value.color === "RED" || value.color === "ORANGE")
      ) {
        return {
          type: "alert",
          seq: value.seq,
          keyword: value.keyword,
          stem: value.stem,
          label: value.label,
          color: value.color,
        };
      }
      return null;
    case "error":
      if (typeof value.code === "string") {
        return { type: "error", code: value.code };
      }
      return null;
    default:
      return null;
  }
}
