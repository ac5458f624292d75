import { ApiClient } from "./api.js";
import { WorkbenchView } from "./view.js";
import { Workbench } from "./workbench.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const workbench = new Workbench(new ApiClient(""));
new WorkbenchView(root, workbench);
void workbench.start();
