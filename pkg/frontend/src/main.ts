/**
 * Two-pane demo: both chatters on one page, one socket per pane, so the
 * relay can be exercised from a single machine. Start the backend with
 *
 *   phishmon serve --port 9009 --stores-dir /tmp/phishmon-stores
 *
 * then open index.html. Query parameters override the defaults:
 * ?ws=ws://host:port&session=name&left=amy&right=ben
 */

import { ChatClient, type SocketLike } from "./client.js";
import { SessionView } from "./view.js";

const params = new URLSearchParams(window.location.search);
const wsUrl = params.get("ws") ?? "ws://127.0.0.1:9010";
const session = params.get("session") ?? "demo";

const browserSocket = (url: string): SocketLike =>
  new WebSocket(url) as unknown as SocketLike;

function pane(rootId: string, who: string): void {
  const root = document.getElementById(rootId);
  if (root === null) throw new Error(`missing pane element #${rootId}`);

  const title = document.createElement("h2");
  title.textContent = who;
  root.append(title);

  const viewRoot = document.createElement("div");
  viewRoot.className = "pane-view";
  root.append(viewRoot);
  const view = new SessionView(viewRoot);

  const client = new ChatClient(wsUrl, session, who, browserSocket, {
    onFrame: (frame) => view.handleFrame(frame),
    onStatus: (status) => view.setStatus(status),
  });

  const form = document.createElement("form");
  const input = document.createElement("input");
  input.type = "text";
  input.placeholder = "type a message";
  const button = document.createElement("button");
  button.type = "submit";
  button.textContent = "send";
  form.append(input, button);
  form.onsubmit = (ev) => {
    ev.preventDefault();
    const text = input.value.trim();
    if (text.length === 0) return;
    client.send(text);
    view.echoLocal(who, text);
    input.value = "";
  };
  root.append(form);

  client.connect();
}

pane("left", params.get("left") ?? "amy");
pane("right", params.get("right") ?? "ben");
