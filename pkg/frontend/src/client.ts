/**
 * WebSocket session client.
 *
 * The socket is injected as a factory so the same class runs against the
 * browser WebSocket, the `ws` package in tests, or a hand-rolled fake.
 * On any non-intentional close the client enters a visible "reconnecting"
 * state and redials; rejoining under the same name makes the relay replay
 * the backlog accumulated while away.
 */

import { joinFrame, msgFrame, parseFrame, type ServerFrame } from "./protocol.js";

/** Structural subset shared by browser WebSocket and the `ws` package. */
export interface SocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

export type ClientStatus = "connecting" | "open" | "reconnecting" | "closed";

export interface ClientEvents {
  onFrame?: (frame: ServerFrame) => void;
  onStatus?: (status: ClientStatus) => void;
}

export class ChatClient {
  private socket: SocketLike | null = null;
  private closed = false;
  private outbox: string[] = [];
  private joined = false;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly url: string,
    readonly session: string,
    readonly who: string,
    private readonly factory: SocketFactory,
    private readonly events: ClientEvents = {},
    private readonly reconnectDelayMs = 500,
  ) {}

  connect(): void {
    if (this.closed) return;
    this.setStatus("connecting");
    const socket = this.factory(this.url);
    this.socket = socket;
    socket.onopen = () => {
      if (this.socket !== socket) return;
      socket.send(JSON.stringify(joinFrame(this.session, this.who)));
      this.joined = true;
      this.setStatus("open");
      // flush anything typed while the pipe was down
      for (const text of this.outbox.splice(0)) {
        socket.send(JSON.stringify(msgFrame(text)));
      }
    };
    socket.onmessage = (ev) => {
      if (this.socket !== socket) return;
      const raw = typeof ev.data === "string" ? ev.data : String(ev.data);
      const frame = parseFrame(raw);
      if (frame === null) {
        console.warn("chat-ui: ignoring malformed frame:", raw);
        return;
      }
      this.events.onFrame?.(frame);
    };
    socket.onerror = () => {
      // the close handler owns recovery; errors alone are not terminal
    };
    socket.onclose = () => {
      if (this.socket !== socket) return;
      this.socket = null;
      this.joined = false;
      if (this.closed) {
        this.setStatus("closed");
        return;
      }
      this.setStatus("reconnecting");
      this.reconnectTimer = setTimeout(() => this.connect(), this.reconnectDelayMs);
    };
  }

  /** Queue-or-send one chat line. Safe to call while reconnecting. */
  send(text: string): void {
    if (this.closed) throw new Error("client is closed");
    if (this.socket !== null && this.joined) {
      this.socket.send(JSON.stringify(msgFrame(text)));
    } else {
      this.outbox.push(text);
    }
  }

  /** Intentional shutdown; no reconnect. */
  close(): void {
    this.closed = true;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    const socket = this.socket;
    this.socket = null;
    if (socket !== null) {
      socket.onclose = null;
      socket.close();
    }
    this.setStatus("closed");
  }

  private setStatus(status: ClientStatus): void {
    this.events.onStatus?.(status);
  }
}
