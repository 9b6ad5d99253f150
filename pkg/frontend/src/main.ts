import { ApiClient } from "./api";
import { initApp } from "./app";
import "./style.css";

const root = document.getElementById("app");
if (root === null) throw new Error("missing #app mount point");
initApp(root, new ApiClient());
