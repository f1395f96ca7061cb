package org.gudy.azureus2.ui.console;

import org.gudy.azureus2.ui.common.UITemplate;
import org.gudy.azureus2.ui.common.UserInterface;

public class UI extends UITemplate implements UserInterface {
    public void openTorrent(String fileName) {
    }
}
